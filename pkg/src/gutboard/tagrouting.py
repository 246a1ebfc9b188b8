"""Tag-to-topic routing.

Resolution order: exact lookup in the curated synonym table first, then a
TF-IDF centroid classifier over per-topic text corpora. Tags that neither
path can place land in an unmapped queue for curator review.
"""

from __future__ import annotations

import hashlib
import json
import re
import time
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    ConfigInvalid,
    EmptyCorpus,
    ModelNotBuilt,
    NotAuthorized,
    SeedParseError,
    UnknownTopic,
)
from .store import Store

# Unicode letters and digits, underscore excluded.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

MIN_TOKEN_LEN = 2
DEFAULT_THRESHOLD = 0.15


def normalize(raw: str) -> str:
    """Canonicalize a user-entered tag.

    Pipeline: lowercase, Unicode NFC, trim, collapse internal whitespace to
    single spaces, then fold naive plurals by stripping trailing ASCII "s"
    from tokens while they stay at least 4 characters long (the repeat keeps
    the fold idempotent for degenerate runs like "ssss").

    All-whitespace input yields ""; callers treat that as an invalid tag.
    """
    text = unicodedata.normalize("NFC", raw.lower()).strip()
    folded = []
    for token in text.split():
        while len(token) >= 4 and token.endswith("s"):
            token = token[:-1]
        folded.append(token)
    return " ".join(folded)


def tokenize(text: str) -> list[str]:
    """Split on non-alphanumeric, lowercase, drop tokens shorter than 2."""
    return [t for t in _TOKEN_RE.findall(text.lower()) if len(t) >= MIN_TOKEN_LEN]


@dataclass(frozen=True)
class RoutingResult:
    """Outcome of routing one tag: matched topic with score, or unmapped."""

    matched: bool
    topic_id: str | None = None
    score: float | None = None
    method: str | None = None  # "manual" | "classifier"
    diagnostic: str | None = None

    @classmethod
    def manual(cls, topic_id: str) -> "RoutingResult":
        return cls(matched=True, topic_id=topic_id, score=1.0, method="manual")

    @classmethod
    def classified(cls, topic_id: str, score: float) -> "RoutingResult":
        return cls(matched=True, topic_id=topic_id, score=score, method="classifier")

    @classmethod
    def unmapped(cls, diagnostic: str | None = None) -> "RoutingResult":
        return cls(matched=False, diagnostic=diagnostic)


@dataclass(frozen=True)
class UnmappedQueueEntry:
    canonical_tag: str
    example_question_id: str | None
    occurrence_count: int
    first_seen: float


@dataclass
class TopicVectorModel:
    """TF-IDF centroid model: one unit-norm centroid per non-empty topic."""

    vocabulary: list[str]
    idf: np.ndarray  # aligned with vocabulary
    centroids: dict[str, np.ndarray]
    built_at: float
    corpus_fingerprint: str
    _index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        self._index = {t: i for i, t in enumerate(self.vocabulary)}

    def vectorize(self, text: str) -> np.ndarray | None:
        """Unit-norm tf-idf vector of ``text``; None if every token is OOV."""
        counts: dict[int, int] = {}
        for token in tokenize(text):
            idx = self._index.get(token)
            if idx is not None:
                counts[idx] = counts.get(idx, 0) + 1
        if not counts:
            return None
        vec = np.zeros(len(self.vocabulary))
        for idx, count in counts.items():
            vec[idx] = count * self.idf[idx]
        norm = float(np.linalg.norm(vec))
        if norm == 0.0:
            return None
        return vec / norm

    def to_json(self) -> str:
        payload = {
            "vocabulary": self.vocabulary,
            "idf": [float(x) for x in self.idf],
            "centroids": {t: [float(x) for x in c] for t, c in sorted(self.centroids.items())},
            "built_at": self.built_at,
            "corpus_fingerprint": self.corpus_fingerprint,
        }
        return json.dumps(payload, sort_keys=True, indent=2)


def build_model(corpora: dict[str, list[str]], clock=time.time) -> TopicVectorModel:
    """Build the TF-IDF centroid model from per-topic document lists.

    tf(t, d) is the raw count, idf(t) = ln((1+N)/(1+df(t))) + 1 over all N
    usable documents, document vectors are L2-normalized, and each topic
    centroid is the re-normalized mean of its document vectors. Topics whose
    documents all tokenize to nothing are excluded.
    """
    docs: list[tuple[str, list[str]]] = []  # (topic_id, tokens)
    for topic_id, documents in corpora.items():
        for doc in documents:
            tokens = tokenize(doc)
            if tokens:
                docs.append((topic_id, tokens))
    if not docs:
        raise EmptyCorpus("no usable documents in any topic corpus")

    vocabulary = sorted({t for _, tokens in docs for t in tokens})
    index = {t: i for i, t in enumerate(vocabulary)}
    n_docs = len(docs)
    df = np.zeros(len(vocabulary))
    for _, tokens in docs:
        for token in set(tokens):
            df[index[token]] += 1
    idf = np.log((1.0 + n_docs) / (1.0 + df)) + 1.0

    by_topic: dict[str, list[np.ndarray]] = {}
    for topic_id, tokens in docs:
        vec = np.zeros(len(vocabulary))
        for token in tokens:
            vec[index[token]] += 1.0
        vec *= idf
        vec /= np.linalg.norm(vec)
        by_topic.setdefault(topic_id, []).append(vec)

    centroids: dict[str, np.ndarray] = {}
    for topic_id, vectors in by_topic.items():
        centroid = np.mean(vectors, axis=0)
        centroids[topic_id] = centroid / np.linalg.norm(centroid)

    fingerprint = hashlib.sha256(
        json.dumps(
            {t: sorted(d) for t, d in corpora.items()}, sort_keys=True, ensure_ascii=False
        ).encode("utf-8")
    ).hexdigest()
    return TopicVectorModel(
        vocabulary=vocabulary,
        idf=idf,
        centroids=centroids,
        built_at=clock(),
        corpus_fingerprint=fingerprint,
    )


def classify(text: str, model: TopicVectorModel | None, threshold: float) -> RoutingResult:
    """Nearest-centroid cosine classification of ``text``.

    Best topic wins, ties broken by lexicographic topic id; scores below
    ``threshold`` (and all-OOV texts) come back unmapped.
    """
    if model is None:
        raise ModelNotBuilt("no topic vector model")
    if not (0.0 < threshold < 1.0):
        raise ConfigInvalid(f"threshold must be in (0,1), got {threshold}")
    vec = model.vectorize(text)
    if vec is None:
        return RoutingResult.unmapped()
    best_topic: str | None = None
    best_score = -1.0
    for topic_id in sorted(model.centroids):
        score = float(np.dot(model.centroids[topic_id], vec))
        if score > best_score:
            best_topic, best_score = topic_id, score
    best_score = min(1.0, max(0.0, best_score))
    if best_topic is None or best_score < threshold:
        return RoutingResult.unmapped()
    return RoutingResult.classified(best_topic, best_score)


def load_corpus_dir(topics_dir: str | Path) -> dict[str, list[str]]:
    """Read per-topic corpora: one plain-text document per file under each
    per-topic subdirectory of ``topics_dir``."""
    root = Path(topics_dir)
    corpora: dict[str, list[str]] = {}
    for sub in sorted(p for p in root.iterdir() if p.is_dir()):
        documents = [
            f.read_text(encoding="utf-8") for f in sorted(sub.iterdir()) if f.is_file()
        ]
        if documents:
            corpora[sub.name] = documents
    return corpora


def parse_mappings_file(path: str | Path) -> dict[str, str]:
    """Parse the tag<TAB>topic_id seed file ("#" comments, blank lines ok).

    Keys are canonicalized on load; duplicates after normalization are a
    parse error so a seed never half-applies.
    """
    mappings: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split("\t")
        if len(parts) != 2:
            raise SeedParseError(f"{path}:{lineno}: expected tag<TAB>topic_id")
        tag, topic_id = normalize(parts[0]), parts[1].strip()
        if not tag or not topic_id:
            raise SeedParseError(f"{path}:{lineno}: empty tag or topic id")
        if tag in mappings:
            raise SeedParseError(f"{path}:{lineno}: duplicate tag {tag!r}")
        mappings[tag] = topic_id
    return mappings


class TagRouter:
    """Stateful router: manual table and unmapped queue live in the store,
    the vector model is rebuilt from corpora and held in memory."""

    def __init__(self, store: Store, threshold: float = DEFAULT_THRESHOLD, clock=time.time):
        self.store = store
        self.threshold = threshold
        self.clock = clock
        self.model: TopicVectorModel | None = None

    def resolve_manual(self, canonical_tag: str) -> str | None:
        with self.store.read() as state:
            entry = state["manual_mappings"].get(canonical_tag)
            return entry["topic_id"] if entry else None

    def rebuild_model(self, corpora: dict[str, list[str]]) -> TopicVectorModel:
        self.model = build_model(corpora, clock=self.clock)
        return self.model

    def preview(self, raw_tag: str, context_text: str = "") -> RoutingResult:
        """Route without side effects (no queue writes); used by live UI
        previews and by re-routing after curator approvals."""
        canonical = normalize(raw_tag)
        if not canonical:
            return RoutingResult.unmapped(diagnostic="empty_tag")
        topic_id = self.resolve_manual(canonical)
        if topic_id is not None:
            return RoutingResult.manual(topic_id)
        if self.model is None:
            return RoutingResult.unmapped(diagnostic="model_not_built")
        text = canonical + " " + context_text if context_text else canonical
        return classify(text, self.model, self.threshold)

    def route(
        self, raw_tag: str, context_text: str = "", question_id: str | None = None
    ) -> RoutingResult:
        """Resolve a tag; unmapped outcomes upsert the curation queue."""
        canonical = normalize(raw_tag)
        result = self.preview(raw_tag, context_text)
        if not result.matched and canonical:
            self._enqueue_unmapped(canonical, question_id)
        return result

    def _enqueue_unmapped(self, canonical_tag: str, question_id: str | None) -> None:
        with self.store.transaction() as state:
            entry = state["unmapped_queue"].get(canonical_tag)
            if entry is None:
                state["unmapped_queue"][canonical_tag] = {
                    "example_question_id": question_id,
                    "occurrence_count": 1,
                    "first_seen": self.clock(),
                }
            else:
                entry["occurrence_count"] += 1
                if entry["example_question_id"] is None and question_id is not None:
                    entry["example_question_id"] = question_id

    def queue_entries(self) -> list[UnmappedQueueEntry]:
        with self.store.read() as state:
            entries = [
                UnmappedQueueEntry(
                    canonical_tag=tag,
                    example_question_id=rec["example_question_id"],
                    occurrence_count=rec["occurrence_count"],
                    first_seen=rec["first_seen"],
                )
                for tag, rec in state["unmapped_queue"].items()
            ]
        entries.sort(key=lambda e: (-e.occurrence_count, e.canonical_tag))
        return entries

    def approve(
        self,
        actor: dict | None,
        raw_tag: str,
        topic_id: str,
        known_topics: set[str],
    ) -> str:
        """Insert a curator-approved mapping and clear the queue entry.

        ``actor`` is a user record (must be a moderator) or None for the
        operator CLI, which is implicitly trusted. Returns the canonical tag.
        """
        if actor is not None and actor.get("role") != "moderator":
            raise NotAuthorized("only moderators approve mappings")
        if topic_id not in known_topics:
            raise UnknownTopic(f"unknown topic {topic_id!r}")
        canonical = normalize(raw_tag)
        if not canonical:
            raise SeedParseError("tag normalizes to empty string")
        with self.store.transaction() as state:
            state["manual_mappings"][canonical] = {
                "topic_id": topic_id,
                "provenance": "curator-approved",
                "at": self.clock(),
            }
            state["unmapped_queue"].pop(canonical, None)
        return canonical

    def seed_mappings(self, mappings: dict[str, str], known_topics: set[str] | None = None) -> int:
        """Load seeded mappings; never clobbers curator-approved entries."""
        if known_topics is not None:
            unknown = sorted({t for t in mappings.values() if t not in known_topics})
            if unknown:
                raise SeedParseError(f"mappings reference unknown topics: {', '.join(unknown)}")
        inserted = 0
        with self.store.transaction() as state:
            for tag, topic_id in mappings.items():
                existing = state["manual_mappings"].get(tag)
                if existing is not None and existing["provenance"] == "curator-approved":
                    continue
                state["manual_mappings"][tag] = {
                    "topic_id": topic_id,
                    "provenance": "seeded",
                    "at": self.clock(),
                }
                inserted += 1
        return inserted
