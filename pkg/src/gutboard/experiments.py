"""Experiment condition assignment, engagement event logging, sessionized
metrics, and CSV dataset export.

Assignment is deterministic and immutable per (user, experiment). The hash
strategy buckets with FNV-1a 64 over the UTF-8 bytes of the concatenated
string salt + user_id + experiment_id, so assignments are bit-stable across
process restarts. The balanced strategy picks the condition with the fewest
assignees (ties broken by condition order) inside the store's write lock.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import time
import uuid
from dataclasses import dataclass
from pathlib import Path

from .errors import (
    ConfigInvalid,
    SeedParseError,
    UnknownExperiment,
    UnknownKind,
    UnknownUser,
)
from .store import Store

EVENT_KINDS = (
    "section_view",
    "video_play",
    "quiz_answer",
    "question_created",
    "question_edited",
    "level1_answered",
    "level2_answered",
    "comment_added",
    "vote_cast",
    "board_view",
    "login",
)

DEFAULT_SESSION_GAP = 1800.0  # 30 minutes

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def fnv1a64(data: bytes) -> int:
    """FNV-1a, 64-bit: the stable non-cryptographic hash behind bucketing."""
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return h


@dataclass(frozen=True)
class ExperimentDef:
    experiment_id: str
    conditions: tuple[str, ...]
    salt: str
    strategy: str  # "hash" | "balanced"


@dataclass(frozen=True)
class Assignment:
    user_id: str
    experiment_id: str
    condition_id: str
    at: float


@dataclass(frozen=True)
class EngagementEvent:
    event_id: str
    user_id: str
    kind: str
    subject_id: str | None
    at: float


@dataclass(frozen=True)
class Session:
    start: float
    end: float

    @property
    def active_seconds(self) -> float:
        return self.end - self.start


@dataclass(frozen=True)
class MetricsReport:
    user_id: str
    conditions: dict[str, str]  # experiment_id -> condition_id
    session_count: int
    total_active_seconds: float
    event_counts: dict[str, int]  # every kind present, zeros included
    topics: dict[str, "TopicMetrics"]


@dataclass(frozen=True)
class TopicMetrics:
    fraction_viewed: float
    first_attempt_accuracy: float | None


def sessionize(timestamps: list[float], gap_threshold: float) -> list[Session]:
    """Partition event timestamps into sessions.

    Events are sorted; a gap strictly greater than ``gap_threshold`` starts
    a new session. A single-event session contributes 0 active seconds but
    still counts as a session.
    """
    if gap_threshold <= 0:
        raise ConfigInvalid("gap_threshold must be > 0")
    if not timestamps:
        return []
    times = sorted(timestamps)
    sessions: list[Session] = []
    start = prev = times[0]
    for t in times[1:]:
        if t - prev > gap_threshold:
            sessions.append(Session(start=start, end=prev))
            start = t
        prev = t
    sessions.append(Session(start=start, end=prev))
    return sessions


def validate_experiment_def(doc: dict, origin: str = "experiment") -> dict:
    def fail(msg: str):
        raise SeedParseError(f"{origin}: {msg}")

    experiment_id = doc.get("experiment_id")
    if not isinstance(experiment_id, str) or not experiment_id:
        fail("experiment_id must be a non-empty string")
    conditions = doc.get("conditions")
    if not isinstance(conditions, list) or len(conditions) < 2:
        fail("conditions must list at least 2 condition ids")
    if len(set(conditions)) != len(conditions):
        fail("condition ids must be unique")
    salt = doc.get("salt")
    if not isinstance(salt, str) or not salt:
        fail("salt must be a non-empty string")
    strategy = doc.get("strategy")
    if strategy not in ("hash", "balanced"):
        fail("strategy must be 'hash' or 'balanced'")
    return {
        "experiment_id": experiment_id,
        "conditions": list(conditions),
        "salt": salt,
        "strategy": strategy,
    }


def load_experiments_file(path: str | Path) -> list[dict]:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except ValueError as exc:
        raise SeedParseError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(raw, list):
        raise SeedParseError(f"{path}: expected a list of experiment definitions")
    docs = [validate_experiment_def(d, origin=str(path)) for d in raw]
    ids = [d["experiment_id"] for d in docs]
    if len(set(ids)) != len(ids):
        raise SeedParseError(f"{path}: duplicate experiment_id")
    return docs


class Experiments:
    def __init__(
        self,
        store: Store,
        learning=None,
        clock=time.time,
        session_gap: float = DEFAULT_SESSION_GAP,
    ):
        self.store = store
        self.learning = learning
        self.clock = clock
        self.session_gap = session_gap

    def seed_experiments(self, docs: list[dict]) -> int:
        with self.store.transaction() as state:
            for doc in docs:
                state["experiments"][doc["experiment_id"]] = doc
        return len(docs)

    def get(self, experiment_id: str) -> ExperimentDef:
        with self.store.read() as state:
            rec = state["experiments"].get(experiment_id)
        if rec is None:
            raise UnknownExperiment(f"no experiment {experiment_id!r}")
        return ExperimentDef(
            rec["experiment_id"], tuple(rec["conditions"]), rec["salt"], rec["strategy"]
        )

    def experiment_ids(self) -> list[str]:
        with self.store.read() as state:
            return sorted(state["experiments"])

    def _require_user(self, state: dict, user_id: str) -> None:
        if user_id not in state["users"]:
            raise UnknownUser(f"no user {user_id!r}")

    def assign(self, user_id: str, experiment_id: str) -> Assignment:
        """Idempotent: an existing assignment is returned unchanged."""
        with self.store.transaction() as state:
            self._require_user(state, user_id)
            exp = state["experiments"].get(experiment_id)
            if exp is None:
                raise UnknownExperiment(f"no experiment {experiment_id!r}")
            per_exp = state["assignments"].setdefault(experiment_id, {})
            existing = per_exp.get(user_id)
            if existing is not None:
                return Assignment(user_id, experiment_id, existing["condition_id"], existing["at"])
            conditions = exp["conditions"]
            if exp["strategy"] == "hash":
                bucket = fnv1a64((exp["salt"] + user_id + experiment_id).encode("utf-8"))
                condition = conditions[bucket % len(conditions)]
            else:
                counts = {c: 0 for c in conditions}
                for rec in per_exp.values():
                    counts[rec["condition_id"]] += 1
                condition = min(conditions, key=lambda c: (counts[c], conditions.index(c)))
            at = self.clock()
            per_exp[user_id] = {"condition_id": condition, "at": at}
            return Assignment(user_id, experiment_id, condition, at)

    def assignments_for(self, experiment_id: str) -> dict[str, str]:
        with self.store.read() as state:
            if experiment_id not in state["experiments"]:
                raise UnknownExperiment(f"no experiment {experiment_id!r}")
            per_exp = state["assignments"].get(experiment_id, {})
            return {uid: rec["condition_id"] for uid, rec in per_exp.items()}

    def log_event(
        self, user_id: str, kind: str, subject_id: str | None = None, at: float | None = None
    ) -> EngagementEvent:
        if kind not in EVENT_KINDS:
            raise UnknownKind(f"unknown event kind {kind!r}")
        with self.store.transaction() as state:
            self._require_user(state, user_id)
            event = {
                "event_id": f"e_{uuid.uuid4().hex[:12]}",
                "user_id": user_id,
                "kind": kind,
                "subject_id": subject_id,
                "at": self.clock() if at is None else float(at),
            }
            state["events"].append(event)
            return EngagementEvent(**event)

    def events_for(self, user_id: str) -> list[EngagementEvent]:
        with self.store.read() as state:
            return [EngagementEvent(**e) for e in state["events"] if e["user_id"] == user_id]

    def compute_metrics(self, user_id: str, gap_threshold: float | None = None) -> MetricsReport:
        gap = self.session_gap if gap_threshold is None else gap_threshold
        with self.store.read() as state:
            self._require_user(state, user_id)
            events = [e for e in state["events"] if e["user_id"] == user_id]
            conditions = {
                exp_id: per_exp[user_id]["condition_id"]
                for exp_id, per_exp in state["assignments"].items()
                if user_id in per_exp
            }
            topic_ids = sorted(state["topics"])
        sessions = sessionize([e["at"] for e in events], gap)
        counts = {kind: 0 for kind in EVENT_KINDS}
        for e in events:
            counts[e["kind"]] += 1
        topics = {}
        if self.learning is not None:
            for topic_id in topic_ids:
                summary = self.learning.progress_summary(user_id, topic_id)
                topics[topic_id] = TopicMetrics(
                    fraction_viewed=summary.fraction_viewed,
                    first_attempt_accuracy=summary.first_attempt_accuracy,
                )
        return MetricsReport(
            user_id=user_id,
            conditions=conditions,
            session_count=len(sessions),
            total_active_seconds=sum(s.active_seconds for s in sessions),
            event_counts=counts,
            topics=topics,
        )

    @staticmethod
    def pseudonym(salt: str, user_id: str) -> str:
        """Stable salted pseudonym used in exports instead of raw user ids."""
        return hashlib.sha256(f"{salt}:{user_id}".encode("utf-8")).hexdigest()[:16]

    def export_dataset(self, experiment_id: str) -> str:
        """RFC-4180 CSV: one row per assigned user, cells mirror
        compute_metrics output exactly. Rows are ordered by pseudonym."""
        exp = self.get(experiment_id)
        assigned = self.assignments_for(experiment_id)
        topic_ids = self.learning.topic_ids() if self.learning is not None else []
        header = ["user", "condition", "session_count", "total_active_seconds"]
        header += [f"events_{kind}" for kind in EVENT_KINDS]
        for topic_id in topic_ids:
            header += [f"{topic_id}_fraction_viewed", f"{topic_id}_first_attempt_accuracy"]

        rows = []
        for user_id, condition in assigned.items():
            report = self.compute_metrics(user_id)
            row: list[object] = [
                self.pseudonym(exp.salt, user_id),
                condition,
                report.session_count,
                report.total_active_seconds,
            ]
            row += [report.event_counts[kind] for kind in EVENT_KINDS]
            for topic_id in topic_ids:
                tm = report.topics[topic_id]
                row.append(tm.fraction_viewed)
                accuracy = tm.first_attempt_accuracy
                row.append("" if accuracy is None else accuracy)
            rows.append(row)
        rows.sort(key=lambda r: r[0])

        out = io.StringIO()
        writer = csv.writer(out, quoting=csv.QUOTE_MINIMAL, lineterminator="\r\n")
        writer.writerow(header)
        writer.writerows(rows)
        return out.getvalue()
