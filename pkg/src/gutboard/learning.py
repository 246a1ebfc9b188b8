"""Curated topic pages and misconception quizzes with rapid expert feedback.

Topic content is seeded from JSON documents and treated as immutable at
runtime; per-learner progress (viewed sections, quiz answers) accumulates in
the store. Every quiz answer returns the item's expert insight, right or
wrong, so feedback is immediate.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from pathlib import Path

from .errors import (
    IndexOutOfRange,
    SeedParseError,
    UnknownItem,
    UnknownSection,
    UnknownTopic,
    UnknownUser,
)
from .store import Store


@dataclass(frozen=True)
class ContentSection:
    section_id: str
    heading: str
    body: str
    media_url: str | None


@dataclass(frozen=True)
class QuizItem:
    item_id: str
    prompt: str
    options: tuple[str, ...]
    correct_index: int
    expert_insight: str


@dataclass(frozen=True)
class Topic:
    topic_id: str
    title: str
    sections: tuple[ContentSection, ...]
    quiz: tuple[QuizItem, ...]


@dataclass(frozen=True)
class Feedback:
    correct: bool
    expert_insight: str


@dataclass(frozen=True)
class ProgressSummary:
    fraction_viewed: float
    first_attempt_accuracy: float | None


def validate_topic_doc(doc: dict, origin: str = "topic document") -> dict:
    """Validate one topic seed document; raises SeedParseError with the
    first violation found."""

    def fail(msg: str):
        raise SeedParseError(f"{origin}: {msg}")

    if not isinstance(doc, dict):
        fail("root must be an object")
    topic_id = doc.get("topic_id")
    if not isinstance(topic_id, str) or not topic_id.strip():
        fail("topic_id must be a non-empty string")
    title = doc.get("title")
    if not isinstance(title, str) or not title.strip():
        fail("title must be a non-empty string")
    sections = doc.get("sections")
    if not isinstance(sections, list) or not sections:
        fail("sections must be a non-empty list")
    seen_sections: set[str] = set()
    for sec in sections:
        sid = sec.get("section_id")
        if not isinstance(sid, str) or not sid:
            fail("every section needs a section_id")
        if sid in seen_sections:
            fail(f"duplicate section_id {sid!r}")
        seen_sections.add(sid)
        if not isinstance(sec.get("heading"), str):
            fail(f"section {sid!r}: heading must be a string")
        if not isinstance(sec.get("body"), str) or not sec["body"].strip():
            fail(f"section {sid!r}: body must be non-empty")
        if sec.get("media_url") is not None and not isinstance(sec["media_url"], str):
            fail(f"section {sid!r}: media_url must be a string")
    quiz = doc.get("quiz", [])
    if not isinstance(quiz, list):
        fail("quiz must be a list")
    seen_items: set[str] = set()
    for item in quiz:
        iid = item.get("item_id")
        if not isinstance(iid, str) or not iid:
            fail("every quiz item needs an item_id")
        if iid in seen_items:
            fail(f"duplicate item_id {iid!r}")
        seen_items.add(iid)
        options = item.get("options")
        if not isinstance(options, list) or len(options) < 2:
            fail(f"quiz item {iid!r}: needs at least 2 options")
        correct = item.get("correct_index")
        if not isinstance(correct, int) or isinstance(correct, bool) or not (
            0 <= correct < len(options)
        ):
            fail(f"quiz item {iid!r}: correct_index out of range")
        if not isinstance(item.get("prompt"), str) or not item["prompt"].strip():
            fail(f"quiz item {iid!r}: prompt must be non-empty")
        if not isinstance(item.get("expert_insight"), str) or not item["expert_insight"].strip():
            fail(f"quiz item {iid!r}: expert_insight must be non-empty")
    return {
        "topic_id": topic_id.strip(),
        "title": title.strip(),
        "sections": [
            {
                "section_id": s["section_id"],
                "heading": s["heading"],
                "body": s["body"],
                "media_url": s.get("media_url"),
            }
            for s in sections
        ],
        "quiz": [
            {
                "item_id": i["item_id"],
                "prompt": i["prompt"],
                "options": list(i["options"]),
                "correct_index": i["correct_index"],
                "expert_insight": i["expert_insight"],
            }
            for i in quiz
        ],
    }


def load_topics_dir(topics_dir: str | Path) -> list[dict]:
    """Parse and validate every ``*.json`` topic document under a directory.

    The whole batch is validated before anything is returned, so a bad file
    (including a duplicate topic_id) seeds nothing.
    """
    docs: list[dict] = []
    seen: set[str] = set()
    for path in sorted(Path(topics_dir).glob("*.json")):
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except ValueError as exc:
            raise SeedParseError(f"{path}: invalid JSON: {exc}") from exc
        doc = validate_topic_doc(raw, origin=str(path))
        if doc["topic_id"] in seen:
            raise SeedParseError(f"{path}: duplicate topic_id {doc['topic_id']!r}")
        seen.add(doc["topic_id"])
        docs.append(doc)
    return docs


def _topic_view(rec: dict) -> Topic:
    return Topic(
        topic_id=rec["topic_id"],
        title=rec["title"],
        sections=tuple(
            ContentSection(s["section_id"], s["heading"], s["body"], s.get("media_url"))
            for s in rec["sections"]
        ),
        quiz=tuple(
            QuizItem(
                i["item_id"], i["prompt"], tuple(i["options"]), i["correct_index"], i["expert_insight"]
            )
            for i in rec["quiz"]
        ),
    )


class Learning:
    def __init__(self, store: Store, clock=time.time, event_logger=None):
        self.store = store
        self.clock = clock
        # Called as event_logger(user_id, kind, subject_id, at) after
        # progress mutations; wired to the experiment module's log_event.
        self.event_logger = event_logger

    def seed_topics(self, docs: list[dict]) -> int:
        with self.store.transaction() as state:
            for doc in docs:
                state["topics"][doc["topic_id"]] = doc
        return len(docs)

    def topic_ids(self) -> list[str]:
        with self.store.read() as state:
            return sorted(state["topics"])

    def get_topic(self, topic_id: str) -> Topic:
        with self.store.read() as state:
            rec = state["topics"].get(topic_id)
        if rec is None:
            raise UnknownTopic(f"no topic {topic_id!r}")
        return _topic_view(rec)

    def list_topics(self) -> list[Topic]:
        with self.store.read() as state:
            recs = [state["topics"][tid] for tid in sorted(state["topics"])]
        return [_topic_view(r) for r in recs]

    def _require_user(self, state: dict, user_id: str) -> None:
        if user_id not in state["users"]:
            raise UnknownUser(f"no user {user_id!r}")

    def _progress(self, state: dict, user_id: str, topic_id: str) -> dict:
        by_user = state["progress"].setdefault(user_id, {})
        return by_user.setdefault(
            topic_id, {"viewed_sections": [], "quiz_answers": {}, "first_attempts": {}}
        )

    def record_view(self, user_id: str, topic_id: str, section_id: str) -> list[str]:
        """Mark a section viewed (idempotent) and log a section_view event.
        Returns the updated viewed-section list."""
        with self.store.transaction() as state:
            self._require_user(state, user_id)
            topic = state["topics"].get(topic_id)
            if topic is None:
                raise UnknownTopic(f"no topic {topic_id!r}")
            if section_id not in {s["section_id"] for s in topic["sections"]}:
                raise UnknownSection(f"topic {topic_id!r} has no section {section_id!r}")
            progress = self._progress(state, user_id, topic_id)
            if section_id not in progress["viewed_sections"]:
                progress["viewed_sections"].append(section_id)
                progress["viewed_sections"].sort()
            viewed = list(progress["viewed_sections"])
            if self.event_logger is not None:
                self.event_logger(user_id, "section_view", f"{topic_id}/{section_id}", self.clock())
            return viewed

    def answer_quiz(self, user_id: str, topic_id: str, item_id: str, chosen_index: int) -> Feedback:
        """Check an answer; the expert insight comes back on every answer.

        First-attempt correctness is recorded once and never overwritten;
        the latest answer is upserted.
        """
        with self.store.transaction() as state:
            self._require_user(state, user_id)
            topic = state["topics"].get(topic_id)
            if topic is None:
                raise UnknownTopic(f"no topic {topic_id!r}")
            item = next((i for i in topic["quiz"] if i["item_id"] == item_id), None)
            if item is None:
                raise UnknownItem(f"topic {topic_id!r} has no quiz item {item_id!r}")
            if not (0 <= chosen_index < len(item["options"])):
                raise IndexOutOfRange(
                    f"chosen_index {chosen_index} out of range for {len(item['options'])} options"
                )
            now = self.clock()
            correct = chosen_index == item["correct_index"]
            progress = self._progress(state, user_id, topic_id)
            if item_id not in progress["first_attempts"]:
                progress["first_attempts"][item_id] = {"correct": correct, "at": now}
            progress["quiz_answers"][item_id] = {
                "chosen_index": chosen_index,
                "correct": correct,
                "at": now,
            }
            if self.event_logger is not None:
                self.event_logger(user_id, "quiz_answer", f"{topic_id}/{item_id}", now)
            return Feedback(correct=correct, expert_insight=item["expert_insight"])

    def progress_summary(self, user_id: str, topic_id: str) -> ProgressSummary:
        with self.store.read() as state:
            topic = state["topics"].get(topic_id)
            if topic is None:
                raise UnknownTopic(f"no topic {topic_id!r}")
            progress = state["progress"].get(user_id, {}).get(topic_id)
            section_ids = {s["section_id"] for s in topic["sections"]}
            if progress is None:
                return ProgressSummary(fraction_viewed=0.0, first_attempt_accuracy=None)
            viewed = set(progress["viewed_sections"]) & section_ids
            fraction = len(viewed) / len(section_ids)
            firsts = progress["first_attempts"]
            if not firsts:
                accuracy = None
            else:
                accuracy = sum(1 for a in firsts.values() if a["correct"]) / len(firsts)
            return ProgressSummary(fraction_viewed=fraction, first_attempt_accuracy=accuracy)
