"""Likert-scale evaluation: per-expression, per-judge agreement weights and
the cumulative session score (the grand mean over judges and expressions).

Ratings persist in an append-only JSON-lines event log; in-memory state is
derived by replay, so a restarted service resumes exactly where it stopped.
Overwrites keep the full audit trail in the log.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from .errors import EmptyMatrixError, EvalError, SessionCompleteError, UnknownSessionError


class LikertLabel(enum.Enum):
    STRONGLY_AGREE = "strongly_agree"
    AGREE = "agree"
    NEUTRAL = "neutral"
    DISAGREE = "disagree"
    STRONGLY_DISAGREE = "strongly_disagree"


# Endpoints are fixed at +/-1; the interior spacing is uniform by default and
# configurable via the sigma argument of score_matrix.
DEFAULT_SIGMA: dict[LikertLabel, float] = {
    LikertLabel.STRONGLY_AGREE: 1.0,
    LikertLabel.AGREE: 0.5,
    LikertLabel.NEUTRAL: 0.0,
    LikertLabel.DISAGREE: -0.5,
    LikertLabel.STRONGLY_DISAGREE: -1.0,
}


@dataclass(frozen=True)
class Rating:
    session_id: str
    expression_id: int
    judge_id: str
    label: LikertLabel
    timestamp: float = 0.0


@dataclass(frozen=True)
class SessionScore:
    score: float
    n: int
    m: int
    per_expression: list[float | None]
    complete: bool
    rated: int

    def to_json(self) -> dict:
        return {
            "score": self.score,
            "n": self.n,
            "m": self.m,
            "per_expression": self.per_expression,
            "complete": self.complete,
            "rated": self.rated,
        }


def score_matrix(labels, sigma: dict[LikertLabel, float] | None = None) -> SessionScore:
    """Mean weight over all filled (expression, judge) cells.

    labels is an n x m nested sequence of LikertLabel or None. A matrix with
    gaps yields a partial score flagged complete=False; a matrix with no
    ratings at all cannot be scored.
    """
    sigma = sigma or DEFAULT_SIGMA
    rows = [list(r) for r in labels]
    n = len(rows)
    m = len(rows[0]) if rows else 0
    if n == 0 or m == 0:
        raise EmptyMatrixError("rating matrix has no cells")
    if any(len(r) != m for r in rows):
        raise EvalError("ragged rating matrix")
    total = 0.0
    count = 0
    per_expression: list[float | None] = []
    for row in rows:
        row_sum = 0.0
        row_count = 0
        for label in row:
            if label is None:
                continue
            row_sum += sigma[label]
            row_count += 1
        per_expression.append(row_sum / row_count if row_count else None)
        total += row_sum
        count += row_count
    if count == 0:
        raise EmptyMatrixError("rating matrix has no filled cells")
    return SessionScore(score=total / count, n=n, m=m,
                        per_expression=per_expression,
                        complete=(count == n * m), rated=count)


# ── durable store ────────────────────────────────────────

@dataclass
class SessionState:
    session_id: str
    n_expressions: int
    judges: tuple[str, ...]
    meta: dict = field(default_factory=dict)
    ratings: dict[tuple[int, str], LikertLabel] = field(default_factory=dict)

    @property
    def total_tasks(self) -> int:
        return self.n_expressions * len(self.judges)

    @property
    def complete(self) -> bool:
        return len(self.ratings) == self.total_tasks

    def labels_matrix(self) -> list[list[LikertLabel | None]]:
        return [[self.ratings.get((i, j)) for j in self.judges]
                for i in range(self.n_expressions)]

    def next_task(self, judge: str) -> int | None:
        if judge not in self.judges:
            raise EvalError(f"unknown judge {judge!r}")
        for i in range(self.n_expressions):
            if (i, judge) not in self.ratings:
                return i
        return None

    def judge_progress(self, judge: str) -> int:
        return sum(1 for (i, j) in self.ratings if j == judge)


class RatingLog:
    """Append-only event log (JSON lines) with replay-derived session state.

    Writes are serialized behind a lock (single writer); reads of derived
    state never touch the file.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self.sessions: dict[str, SessionState] = {}
        if self.path.exists():
            self._replay()

    def _replay(self) -> None:
        with self.path.open(encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    self._apply(json.loads(line))

    def _apply(self, event: dict) -> None:
        if event["event"] == "session_created":
            st = SessionState(event["session_id"], event["n_expressions"],
                              tuple(event["judges"]), event.get("meta") or {})
            self.sessions[st.session_id] = st
        elif event["event"] == "rating":
            st = self.sessions[event["session_id"]]
            st.ratings[(event["expression_id"], event["judge_id"])] = \
                LikertLabel(event["label"])

    def _append(self, event: dict) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self.path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(event, ensure_ascii=False) + "\n")
            fh.flush()

    def create_session(self, session_id: str, n_expressions: int,
                       judges, meta: dict | None = None) -> SessionState:
        if n_expressions <= 0 or not judges:
            raise EvalError("session needs at least one expression and one judge")
        with self._lock:
            if session_id in self.sessions:
                raise EvalError(f"session {session_id!r} already exists")
            event = {"event": "session_created", "session_id": session_id,
                     "n_expressions": n_expressions, "judges": list(judges),
                     "meta": meta or {}, "ts": time.time()}
            self._append(event)
            self._apply(event)
            return self.sessions[session_id]

    def session(self, session_id: str) -> SessionState:
        st = self.sessions.get(session_id)
        if st is None:
            raise UnknownSessionError(f"unknown session {session_id!r}")
        return st

    def record(self, rating: Rating) -> dict:
        """Idempotent on identical payloads; differing re-submissions overwrite
        (the log keeps every event as the audit trail)."""
        with self._lock:
            st = self.session(rating.session_id)
            if not 0 <= rating.expression_id < st.n_expressions:
                raise EvalError(f"expression_id {rating.expression_id} out of range")
            if rating.judge_id not in st.judges:
                raise EvalError(f"unknown judge {rating.judge_id!r}")
            if st.complete:
                raise SessionCompleteError(
                    f"session {rating.session_id!r} is complete; ratings are read-only")
            key = (rating.expression_id, rating.judge_id)
            previous = st.ratings.get(key)
            if previous == rating.label:
                return {"recorded": True, "changed": False,
                        "session_complete": st.complete}
            event = {"event": "rating", "session_id": rating.session_id,
                     "expression_id": rating.expression_id,
                     "judge_id": rating.judge_id, "label": rating.label.value,
                     "ts": rating.timestamp or time.time()}
            self._append(event)
            self._apply(event)
            return {"recorded": True, "changed": True,
                    "overwrote": previous.value if previous else None,
                    "session_complete": st.complete}

    def score(self, session_id: str) -> SessionScore:
        return score_matrix(self.session(session_id).labels_matrix())

    def audit(self, session_id: str) -> list[dict]:
        """Every logged event for the session, in order (includes overwrites)."""
        if not self.path.exists():
            return []
        out = []
        with self.path.open(encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    event = json.loads(line)
                    if event.get("session_id") == session_id:
                        out.append(event)
        return out


# ── CSV interchange ──────────────────────────────────────

CSV_FIELDS = ("session_id", "expression_id", "judge_id", "label", "sigma", "timestamp")


def export_csv(log: RatingLog, session_id: str,
               sigma: dict[LikertLabel, float] | None = None) -> str:
    sigma = sigma or DEFAULT_SIGMA
    st = log.session(session_id)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(CSV_FIELDS)
    for event in log.audit(session_id):
        if event["event"] != "rating":
            continue
        label = LikertLabel(event["label"])
        writer.writerow([session_id, event["expression_id"], event["judge_id"],
                         label.value, sigma[label], event["ts"]])
    return buf.getvalue()


def read_ratings_csv(path: str | Path) -> list[list[LikertLabel | None]]:
    """Rebuild the rating matrix from CSV rows (last row per cell wins)."""
    cells: dict[tuple[int, str], LikertLabel] = {}
    judges: list[str] = []
    max_expr = -1
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            i = int(row["expression_id"])
            j = row["judge_id"]
            cells[(i, j)] = LikertLabel(row["label"])
            if j not in judges:
                judges.append(j)
            max_expr = max(max_expr, i)
    if max_expr < 0:
        raise EmptyMatrixError(f"no ratings in {path}")
    return [[cells.get((i, j)) for j in judges] for i in range(max_expr + 1)]
