"""Platform facade: wires the store and every module together, owns seeding
and startup, and exposes the cross-module operations (curator approval with
re-routing, startup seeding) as single transactions."""

from __future__ import annotations

import time
from pathlib import Path

from . import experiments as experiments_mod
from . import learning as learning_mod
from . import tagrouting
from .board import Board
from .config import ApiConfig
from .errors import UnknownUser
from .experiments import Experiments
from .learning import Learning
from .store import SNAPSHOT_NAME, Store
from .tagrouting import TagRouter


class Platform:
    def __init__(self, config: ApiConfig | None = None, store: Store | None = None, clock=time.time):
        self.config = config or ApiConfig()
        if store is None:
            store = Store(Path(self.config.data_path) / SNAPSHOT_NAME)
        self.store = store
        self.clock = clock
        self.router = TagRouter(store, threshold=self.config.router_threshold, clock=clock)
        self.board = Board(store, self.router, clock=clock)
        self.learning = Learning(store, clock=clock)
        self.experiments = Experiments(
            store, learning=self.learning, clock=clock, session_gap=self.config.session_gap
        )
        self.learning.event_logger = self.experiments.log_event

    @classmethod
    def in_memory(cls, config: ApiConfig | None = None, clock=time.time) -> "Platform":
        return cls(config=config, store=Store(path=None), clock=clock)

    # -- seeding / startup ---------------------------------------------------

    def seed_topics_dir(self, topics_dir: str | Path) -> int:
        docs = learning_mod.load_topics_dir(topics_dir)
        return self.learning.seed_topics(docs)

    def seed_mappings_file(self, path: str | Path) -> int:
        mappings = tagrouting.parse_mappings_file(path)
        known = set(self.learning.topic_ids()) or None
        return self.router.seed_mappings(mappings, known_topics=known)

    def seed_experiments_file(self, path: str | Path) -> int:
        docs = experiments_mod.load_experiments_file(path)
        return self.experiments.seed_experiments(docs)

    def rebuild_model(self) -> tagrouting.TopicVectorModel | None:
        """Build the routing model from per-topic corpus files; topics with
        no corpus directory fall back to their content section bodies."""
        if self.config.topics_dir is None:
            return None
        corpora = tagrouting.load_corpus_dir(self.config.topics_dir)
        for topic in self.learning.list_topics():
            if topic.topic_id not in corpora:
                docs = [f"{s.heading} {s.body}" for s in topic.sections]
                if docs:
                    corpora[topic.topic_id] = docs
        if not corpora:
            return None
        return self.router.rebuild_model(corpora)

    def startup(self) -> None:
        """Seed from the configured files (topics, then mappings and
        experiments) and build the routing model."""
        if self.config.topics_dir is not None and Path(self.config.topics_dir).is_dir():
            self.seed_topics_dir(self.config.topics_dir)
        if self.config.mappings_file is not None and Path(self.config.mappings_file).is_file():
            self.seed_mappings_file(self.config.mappings_file)
        if self.config.experiments_file is not None and Path(self.config.experiments_file).is_file():
            self.seed_experiments_file(self.config.experiments_file)
        self.rebuild_model()

    # -- cross-module operations ----------------------------------------------

    def approve_mapping(self, actor_id: str | None, raw_tag: str, topic_id: str) -> dict:
        """Curator approval: insert the mapping, drop the queue entry, then
        re-route every topic-less question bearing the tag. One transaction."""
        with self.store.transaction() as state:
            if actor_id is None:
                actor = None
            else:
                actor = state["users"].get(actor_id)
                if actor is None:
                    raise UnknownUser(f"no user {actor_id!r}")
            known = set(self.learning.topic_ids())
            canonical = self.router.approve(actor, raw_tag, topic_id, known_topics=known)
            rerouted = self.board.reroute_unset(canonical)
        return {"canonical_tag": canonical, "topic_id": topic_id, "rerouted_questions": rerouted}
