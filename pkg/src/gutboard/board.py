"""The collaborative question board: users, three-level questions, gated
responses, threaded comments, and vote tallies.

A question discloses progressively: level 1 is a yes/no prompt that filters
the audience, level 2 collects specific detail from people who answered
"yes", and the open discussion thread hangs off the question for everyone.
"""

from __future__ import annotations

import time
import uuid
from dataclasses import dataclass

from . import tagrouting
from .errors import (
    CrossQuestionParent,
    DuplicateName,
    EmptyText,
    NoTags,
    NotAuthorized,
    NotQualified,
    UnknownParent,
    UnknownQuestion,
    UnknownUser,
)
from .store import Store
from .tagrouting import TagRouter

ROLES = ("participant", "moderator")
QUALIFYING_ANSWER = "yes"  # level-1 convention: "yes" qualifies for level 2


def _new_id(prefix: str) -> str:
    return f"{prefix}_{uuid.uuid4().hex[:12]}"


@dataclass(frozen=True)
class UserAccount:
    user_id: str
    display_name: str
    role: str
    created_at: float


@dataclass(frozen=True)
class Tag:
    raw: str
    canonical: str


@dataclass(frozen=True)
class Question:
    question_id: str
    author_id: str
    level1_text: str
    level2_text: str
    tags: tuple[Tag, ...]
    topic_id: str | None
    score: int
    created_at: float
    edited_at: float
    edit_history: tuple[dict, ...]
    hidden: bool


@dataclass(frozen=True)
class Level1Response:
    question_id: str
    user_id: str
    answer: str
    at: float


@dataclass(frozen=True)
class Level2Response:
    question_id: str
    user_id: str
    body: str
    at: float


@dataclass(frozen=True)
class Comment:
    comment_id: str
    question_id: str
    user_id: str
    body: str
    parent_comment_id: str | None
    at: float


def _question_view(rec: dict) -> Question:
    return Question(
        question_id=rec["question_id"],
        author_id=rec["author_id"],
        level1_text=rec["level1_text"],
        level2_text=rec["level2_text"],
        tags=tuple(Tag(t["raw"], t["canonical"]) for t in rec["tags"]),
        topic_id=rec["topic_id"],
        score=rec["score"],
        created_at=rec["created_at"],
        edited_at=rec["edited_at"],
        edit_history=tuple(rec["edit_history"]),
        hidden=rec["hidden"],
    )


class Board:
    def __init__(self, store: Store, router: TagRouter, clock=time.time):
        self.store = store
        self.router = router
        self.clock = clock

    # -- users ------------------------------------------------------------

    def create_user(self, display_name: str, role: str = "participant") -> UserAccount:
        display_name = display_name.strip()
        if not display_name:
            raise EmptyText("display_name must be non-empty")
        if role not in ROLES:
            raise ValueError(f"role must be one of {ROLES}")
        with self.store.transaction() as state:
            if any(u["display_name"] == display_name for u in state["users"].values()):
                raise DuplicateName(f"display name {display_name!r} already taken")
            user_id = _new_id("u")
            state["users"][user_id] = {
                "user_id": user_id,
                "display_name": display_name,
                "role": role,
                "created_at": self.clock(),
            }
            return self._user_view(state["users"][user_id])

    @staticmethod
    def _user_view(rec: dict) -> UserAccount:
        return UserAccount(rec["user_id"], rec["display_name"], rec["role"], rec["created_at"])

    def get_user(self, user_id: str) -> UserAccount:
        with self.store.read() as state:
            rec = state["users"].get(user_id)
        if rec is None:
            raise UnknownUser(f"no user {user_id!r}")
        return self._user_view(rec)

    def find_user_by_name(self, display_name: str) -> UserAccount | None:
        with self.store.read() as state:
            for rec in state["users"].values():
                if rec["display_name"] == display_name:
                    return self._user_view(rec)
        return None

    def moderator_exists(self) -> bool:
        with self.store.read() as state:
            return any(u["role"] == "moderator" for u in state["users"].values())

    def _require_user(self, state: dict, user_id: str) -> dict:
        rec = state["users"].get(user_id)
        if rec is None:
            raise UnknownUser(f"no user {user_id!r}")
        return rec

    def _require_question(self, state: dict, question_id: str) -> dict:
        rec = state["questions"].get(question_id)
        if rec is None:
            raise UnknownQuestion(f"no question {question_id!r}")
        return rec

    # -- questions ---------------------------------------------------------

    @staticmethod
    def _normalize_tags(tags: list[str]) -> list[Tag]:
        """Normalize, drop empties, dedupe on canonical form keeping first raw."""
        seen: set[str] = set()
        out: list[Tag] = []
        for raw in tags:
            canonical = tagrouting.normalize(raw)
            if canonical and canonical not in seen:
                seen.add(canonical)
                out.append(Tag(raw=raw, canonical=canonical))
        return out

    def _route_first_resolving(
        self, tags: list[Tag], context_text: str, question_id: str, queue_misses: bool = True
    ) -> str | None:
        """Topic of the first tag (in submission order) the router resolves."""
        for tag in tags:
            if queue_misses:
                result = self.router.route(tag.canonical, context_text, question_id=question_id)
            else:
                result = self.router.preview(tag.canonical, context_text)
            if result.matched:
                return result.topic_id
        return None

    def create_question(
        self, author_id: str, level1_text: str, level2_text: str, tags: list[str]
    ) -> Question:
        level1_text = level1_text.strip()
        level2_text = level2_text.strip()
        if not level1_text or not level2_text:
            raise EmptyText("level 1 and level 2 texts must be non-empty")
        tag_objs = self._normalize_tags(tags)
        if not tag_objs:
            raise NoTags("need at least one tag after normalization")
        with self.store.transaction() as state:
            self._require_user(state, author_id)
            question_id = _new_id("q")
            now = self.clock()
            topic_id = self._route_first_resolving(tag_objs, level1_text, question_id)
            rec = {
                "question_id": question_id,
                "author_id": author_id,
                "level1_text": level1_text,
                "level2_text": level2_text,
                "tags": [{"raw": t.raw, "canonical": t.canonical} for t in tag_objs],
                "topic_id": topic_id,
                "score": 0,
                "created_at": now,
                "edited_at": now,
                "edit_history": [],
                "hidden": False,
            }
            state["questions"][question_id] = rec
            return _question_view(rec)

    def edit_question(
        self,
        editor_id: str,
        question_id: str,
        new_level1: str | None = None,
        new_level2: str | None = None,
        new_tags: list[str] | None = None,
        hidden: bool | None = None,
    ) -> Question:
        with self.store.transaction() as state:
            editor = self._require_user(state, editor_id)
            rec = self._require_question(state, question_id)
            is_moderator = editor["role"] == "moderator"
            if rec["author_id"] != editor_id and not is_moderator:
                raise NotAuthorized("only the author or a moderator may edit")
            if hidden is not None and not is_moderator:
                raise NotAuthorized("only moderators may hide or unhide questions")

            if new_level1 is not None:
                new_level1 = new_level1.strip()
                if not new_level1:
                    raise EmptyText("level 1 text must be non-empty")
            if new_level2 is not None:
                new_level2 = new_level2.strip()
                if not new_level2:
                    raise EmptyText("level 2 text must be non-empty")
            tag_objs: list[Tag] | None = None
            if new_tags is not None:
                tag_objs = self._normalize_tags(new_tags)
                if not tag_objs:
                    raise NoTags("need at least one tag after normalization")

            if new_level1 is not None:
                rec["level1_text"] = new_level1
            if new_level2 is not None:
                rec["level2_text"] = new_level2
            if hidden is not None:
                rec["hidden"] = hidden
            if tag_objs is not None:
                old_canon = [t["canonical"] for t in rec["tags"]]
                rec["tags"] = [{"raw": t.raw, "canonical": t.canonical} for t in tag_objs]
                if [t.canonical for t in tag_objs] != old_canon:
                    rec["topic_id"] = self._route_first_resolving(
                        tag_objs, rec["level1_text"], question_id
                    )
            rec["edited_at"] = self.clock()
            rec["edit_history"].append({"at": rec["edited_at"], "editor_id": editor_id})
            return _question_view(rec)

    def get_question(self, question_id: str) -> Question:
        with self.store.read() as state:
            rec = state["questions"].get(question_id)
        if rec is None:
            raise UnknownQuestion(f"no question {question_id!r}")
        return _question_view(rec)

    def list_questions(
        self,
        topic_id: str | None = None,
        tag: str | None = None,
        author_id: str | None = None,
        sort: str = "newest",
        include_hidden: bool = False,
    ) -> list[Question]:
        """Stable total order: newest = created_at desc then id; top = score
        desc, then created_at asc, then id."""
        canonical_tag = tagrouting.normalize(tag) if tag is not None else None
        with self.store.read() as state:
            records = list(state["questions"].values())
        views = []
        for rec in records:
            if rec["hidden"] and not include_hidden:
                continue
            if topic_id is not None and rec["topic_id"] != topic_id:
                continue
            if author_id is not None and rec["author_id"] != author_id:
                continue
            if canonical_tag is not None and canonical_tag not in (
                t["canonical"] for t in rec["tags"]
            ):
                continue
            views.append(_question_view(rec))
        if sort == "top":
            views.sort(key=lambda q: (-q.score, q.created_at, q.question_id))
        else:
            views.sort(key=lambda q: (-q.created_at, q.question_id))
        return views

    def reroute_unset(self, canonical_tag: str) -> int:
        """Re-route topic-less questions bearing ``canonical_tag`` (called
        after a curator approves a mapping). Returns how many were placed."""
        placed = 0
        with self.store.transaction() as state:
            for rec in state["questions"].values():
                if rec["topic_id"] is not None:
                    continue
                if canonical_tag not in (t["canonical"] for t in rec["tags"]):
                    continue
                tags = [Tag(t["raw"], t["canonical"]) for t in rec["tags"]]
                topic_id = self._route_first_resolving(
                    tags, rec["level1_text"], rec["question_id"], queue_misses=False
                )
                if topic_id is not None:
                    rec["topic_id"] = topic_id
                    placed += 1
        return placed

    # -- level 1 / level 2 ---------------------------------------------------

    def answer_level1(self, user_id: str, question_id: str, answer: str) -> Level1Response:
        if answer not in ("yes", "no"):
            raise ValueError("answer must be 'yes' or 'no'")
        with self.store.transaction() as state:
            self._require_user(state, user_id)
            self._require_question(state, question_id)
            now = self.clock()
            per_question = state["level1"].setdefault(question_id, {})
            existing = per_question.get(user_id)
            # Latest answer wins; prior answers stay in history so the
            # level-2 gate trail survives later re-answers.
            history = existing["history"] if existing else []
            history.append({"answer": answer, "at": now})
            per_question[user_id] = {"answer": answer, "at": now, "history": history}
            return Level1Response(question_id, user_id, answer, now)

    def level1_of(self, user_id: str, question_id: str) -> Level1Response | None:
        with self.store.read() as state:
            rec = state["level1"].get(question_id, {}).get(user_id)
        if rec is None:
            return None
        return Level1Response(question_id, user_id, rec["answer"], rec["at"])

    def answer_level2(self, user_id: str, question_id: str, body: str) -> Level2Response:
        body = body.strip()
        if not body:
            raise EmptyText("level 2 response must be non-empty")
        with self.store.transaction() as state:
            self._require_user(state, user_id)
            self._require_question(state, question_id)
            current = state["level1"].get(question_id, {}).get(user_id)
            if current is None or current["answer"] != QUALIFYING_ANSWER:
                raise NotQualified("a qualifying level-1 'yes' answer is required")
            now = self.clock()
            rec = {"question_id": question_id, "user_id": user_id, "body": body, "at": now}
            state["level2"].append(rec)
            return Level2Response(question_id, user_id, body, now)

    def level2_for(self, question_id: str) -> list[Level2Response]:
        with self.store.read() as state:
            return [
                Level2Response(r["question_id"], r["user_id"], r["body"], r["at"])
                for r in state["level2"]
                if r["question_id"] == question_id
            ]

    # -- discussion ----------------------------------------------------------

    def add_comment(
        self, user_id: str, question_id: str, body: str, parent_comment_id: str | None = None
    ) -> Comment:
        body = body.strip()
        if not body:
            raise EmptyText("comment body must be non-empty")
        with self.store.transaction() as state:
            self._require_user(state, user_id)
            self._require_question(state, question_id)
            if parent_comment_id is not None:
                parent = state["comments"].get(parent_comment_id)
                if parent is None:
                    raise UnknownParent(f"no comment {parent_comment_id!r}")
                if parent["question_id"] != question_id:
                    raise CrossQuestionParent("parent comment belongs to another question")
            comment_id = _new_id("c")
            rec = {
                "comment_id": comment_id,
                "question_id": question_id,
                "user_id": user_id,
                "body": body,
                "parent_comment_id": parent_comment_id,
                "at": self.clock(),
            }
            state["comments"][comment_id] = rec
            return Comment(comment_id, question_id, user_id, body, parent_comment_id, rec["at"])

    def comment_counts(self) -> dict[str, int]:
        with self.store.read() as state:
            counts: dict[str, int] = {}
            for rec in state["comments"].values():
                qid = rec["question_id"]
                counts[qid] = counts.get(qid, 0) + 1
            return counts

    def comments_for(self, question_id: str) -> list[Comment]:
        with self.store.read() as state:
            comments = [
                Comment(
                    r["comment_id"],
                    r["question_id"],
                    r["user_id"],
                    r["body"],
                    r["parent_comment_id"],
                    r["at"],
                )
                for r in state["comments"].values()
                if r["question_id"] == question_id
            ]
        comments.sort(key=lambda c: (c.at, c.comment_id))
        return comments

    # -- votes -----------------------------------------------------------------

    def cast_vote(self, user_id: str, question_id: str, direction: str) -> int:
        """Toggle/replace vote semantics; returns the recomputed score."""
        if direction not in ("up", "down"):
            raise ValueError("direction must be 'up' or 'down'")
        with self.store.transaction() as state:
            self._require_user(state, user_id)
            rec = self._require_question(state, question_id)
            votes = state["votes"].setdefault(question_id, {})
            if votes.get(user_id) == direction:
                del votes[user_id]
            else:
                votes[user_id] = direction
            score = sum(1 if d == "up" else -1 for d in votes.values())
            rec["score"] = score
            return score
