"""Survey protocol engine: session state, question sequencing, persistence.

A session walks a fixed forward-only protocol: one verbal judgment per item
pair in a per-session shuffled order, direct 0-10 scores for every item,
demographics, and finally a repeat of the second-presented pair shown in
reverse (sides swapped, category list reversed). State is event-sourced from
an append-only :class:`~pcmscale.app.store.RecordLog`: every accepted answer
is persisted before it is acknowledged, and a service restarted on the same
store resumes exactly where it stopped.
"""

from __future__ import annotations

import itertools
import secrets
import random
import threading
import time
import uuid
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from ..dataset import (
    Demographics,
    Judgment,
    Preferred,
    RespondentRecord,
)
from ..scales import VerbalCategory
from .store import RecordLog

__all__ = [
    "Item",
    "DEFAULT_ITEMS",
    "Phase",
    "SessionState",
    "AnswerError",
    "UnknownSessionError",
    "SurveyService",
    "ExportBundle",
    "export_bundle",
]

# The six stimulus colors with their Color Namer RGB coordinates.
DEFAULT_ITEM_TUPLES = (
    ("red", (189, 62, 57)),
    ("green", (90, 151, 90)),
    ("blue", (84, 110, 183)),
    ("magenta", (179, 55, 151)),
    ("turquoise", (63, 185, 177)),
    ("yellow", (227, 203, 78)),
)

_CATEGORIES = [c.value for c in VerbalCategory]


@dataclass(frozen=True)
class Item:
    name: str
    rgb: tuple[int, int, int]

    def as_dict(self) -> dict:
        return {"name": self.name, "rgb": list(self.rgb)}


DEFAULT_ITEMS = tuple(Item(name, rgb) for name, rgb in DEFAULT_ITEM_TUPLES)


class Phase(Enum):
    PAIRWISE = "pairwise"
    SCORING = "scoring"
    DEMOGRAPHICS = "demographics"
    REPEAT = "repeat"
    DONE = "done"


class AnswerError(ValueError):
    """Submitted answer does not fit the current question; state unchanged."""


class UnknownSessionError(KeyError):
    pass


@dataclass
class SessionState:
    session_id: str
    items: tuple[Item, ...]
    pair_order: tuple[tuple[int, int], ...]  # canonical (i, j), i < j
    seed: int
    created_at: float
    pairwise_answers: list[dict] = field(default_factory=list)
    scores: dict | None = None
    demographics: dict | None = None
    repeat_answer: dict | None = None

    @property
    def n_pairs(self) -> int:
        return len(self.pair_order)

    @property
    def total_steps(self) -> int:
        return self.n_pairs + 3

    @property
    def phase(self) -> Phase:
        if len(self.pairwise_answers) < self.n_pairs:
            return Phase.PAIRWISE
        if self.scores is None:
            return Phase.SCORING
        if self.demographics is None:
            return Phase.DEMOGRAPHICS
        if self.repeat_answer is None:
            return Phase.REPEAT
        return Phase.DONE

    @property
    def step(self) -> int:
        """1-based index of the current question; total_steps + 1 when done."""
        if self.phase is Phase.PAIRWISE:
            return len(self.pairwise_answers) + 1
        if self.phase is Phase.SCORING:
            return self.n_pairs + 1
        if self.phase is Phase.DEMOGRAPHICS:
            return self.n_pairs + 2
        if self.phase is Phase.REPEAT:
            return self.n_pairs + 3
        return self.total_steps + 1

    def phase_label(self) -> str:
        if self.phase is Phase.PAIRWISE:
            return f"pairwise({len(self.pairwise_answers) + 1})"
        return self.phase.value


def _pair_permutation(n: int, seed: int) -> tuple[tuple[int, int], ...]:
    pairs = list(itertools.combinations(range(n), 2))
    random.Random(seed).shuffle(pairs)
    return tuple(pairs)


class SurveyService:
    """Concurrent survey sessions over a shared event log.

    Per-session operations are serialized by a session lock (single writer
    per session); distinct sessions proceed independently. The store itself
    serializes appends, so the log stays well-formed under concurrency.
    """

    def __init__(self, store: RecordLog, session_seed: int | None = None):
        """``session_seed`` makes the seeds of new sessions reproducible
        across a whole experiment; by default they are drawn fresh."""
        self._store = store
        self._sessions: dict[str, SessionState] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()
        self._seed_source = random.Random(session_seed) if session_seed is not None else None
        for event in store.replay():
            self._apply(event)

    # -- event sourcing -----------------------------------------------------

    def _apply(self, event: dict) -> None:
        kind = event["type"]
        if kind == "created":
            items = tuple(Item(n, tuple(rgb)) for n, rgb in event["items"])
            state = SessionState(
                session_id=event["session_id"],
                items=items,
                pair_order=tuple((int(i), int(j)) for i, j in event["pair_order"]),
                seed=int(event["seed"]),
                created_at=float(event["ts"]),
            )
            self._sessions[state.session_id] = state
            self._locks[state.session_id] = threading.Lock()
        elif kind == "answer":
            state = self._sessions[event["session_id"]]
            self._apply_answer(state, event["phase"], event["payload"])
        else:
            raise ValueError(f"unknown event type {kind!r}")

    @staticmethod
    def _apply_answer(state: SessionState, phase: str, payload: dict) -> None:
        if phase == "pairwise":
            state.pairwise_answers.append(payload)
        elif phase == "scoring":
            state.scores = payload
        elif phase == "demographics":
            state.demographics = payload
        elif phase == "repeat":
            state.repeat_answer = payload
        else:
            raise ValueError(f"unknown answer phase {phase!r}")

    # -- public operations ----------------------------------------------------

    def create_session(
        self,
        items: Sequence[Item] | None = None,
        seed: int | None = None,
    ) -> SessionState:
        items = tuple(items) if items is not None else DEFAULT_ITEMS
        if len(items) < 3:
            raise ValueError("need at least 3 items")
        names = [it.name for it in items]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate item names in {names}")
        if seed is None:
            if self._seed_source is not None:
                with self._registry_lock:
                    seed = self._seed_source.getrandbits(63)
            else:
                seed = secrets.randbits(63)
        session_id = uuid.uuid4().hex
        event = {
            "type": "created",
            "session_id": session_id,
            "seed": seed,
            "items": [[it.name, list(it.rgb)] for it in items],
            "pair_order": [list(p) for p in _pair_permutation(len(items), seed)],
            "ts": time.time(),
        }
        self._store.append(event)
        with self._registry_lock:
            self._apply(event)
        return self._sessions[session_id]

    def get_session(self, session_id: str) -> SessionState:
        try:
            return self._sessions[session_id]
        except KeyError:
            raise UnknownSessionError(session_id) from None

    def next_question(self, session_id: str) -> dict:
        state = self.get_session(session_id)
        with self._locks[session_id]:
            return self._question(state)

    def _question(self, state: SessionState) -> dict:
        phase = state.phase
        base = {
            "kind": phase.value,
            "step": min(state.step, state.total_steps),
            "total_steps": state.total_steps,
        }
        if phase is Phase.DONE:
            return {"kind": "done", "total_steps": state.total_steps}
        if phase is Phase.PAIRWISE:
            k = len(state.pairwise_answers)
            i, j = state.pair_order[k]
            base.update(
                pair_index=k + 1,
                left=state.items[i].as_dict(),
                right=state.items[j].as_dict(),
                categories=list(_CATEGORIES),
                pair_reversed=False,
                categories_reversed=False,
            )
        elif phase is Phase.SCORING:
            base.update(
                items=[it.as_dict() for it in state.items],
                min_score=0,
                max_score=10,
            )
        elif phase is Phase.DEMOGRAPHICS:
            base.update(fields=["gender", "age", "county"])
        elif phase is Phase.REPEAT:
            i, j = state.pair_order[1]  # the secondly presented pair
            base.update(
                left=state.items[j].as_dict(),  # sides swapped
                right=state.items[i].as_dict(),
                categories=list(reversed(_CATEGORIES)),
                pair_reversed=True,
                categories_reversed=True,
            )
        return base

    def submit_answer(self, session_id: str, answer: dict) -> dict:
        """Validate, persist, then advance; errors leave the state untouched."""
        state = self.get_session(session_id)
        with self._locks[session_id]:
            phase = state.phase
            if phase is Phase.DONE:
                raise AnswerError("session is complete; no answer expected")
            if phase is Phase.PAIRWISE:
                k = len(state.pairwise_answers)
                payload = self._check_pair_answer(state, answer, state.pair_order[k])
                label = "pairwise"
            elif phase is Phase.SCORING:
                payload = self._check_scores(state, answer)
                label = "scoring"
            elif phase is Phase.DEMOGRAPHICS:
                payload = self._check_demographics(answer)
                label = "demographics"
            else:
                payload = self._check_pair_answer(state, answer, state.pair_order[1])
                label = "repeat"
            event = {
                "type": "answer",
                "session_id": session_id,
                "phase": label,
                "payload": payload,
                "ts": time.time(),
            }
            self._store.append(event)
            self._apply_answer(state, label, payload)
            return {"accepted": True, "next_phase": state.phase_label()}

    @staticmethod
    def _check_pair_answer(
        state: SessionState, answer: dict, expected: tuple[int, int]
    ) -> dict:
        if not isinstance(answer, dict):
            raise AnswerError("answer must be an object")
        try:
            pair = list(answer["pair"])
            preferred = answer["preferred"]
            category = answer["category"]
        except (KeyError, TypeError) as exc:
            raise AnswerError(f"missing field: {exc}") from None
        i, j = expected
        want = {state.items[i].name, state.items[j].name}
        if len(pair) != 2 or set(pair) != want:
            raise AnswerError(
                f"answer is for pair {pair}, expected {sorted(want)}"
            )
        if category not in _CATEGORIES:
            raise AnswerError(f"unknown category {category!r}")
        if category == VerbalCategory.EQUAL.value:
            if preferred != "neither":
                raise AnswerError("'equal' answers must prefer 'neither'")
        else:
            if preferred not in want:
                raise AnswerError(
                    f"preferred must be one of {sorted(want)}, got {preferred!r}"
                )
        return {
            "pair": [state.items[i].name, state.items[j].name],
            "preferred": preferred,
            "category": category,
        }

    @staticmethod
    def _check_scores(state: SessionState, answer: dict) -> dict:
        scores = answer.get("scores") if isinstance(answer, dict) else None
        if not isinstance(scores, dict):
            raise AnswerError("expected an object {scores: {item: 0..10}}")
        names = [it.name for it in state.items]
        if set(scores) != set(names):
            raise AnswerError(f"scores must cover exactly the items {names}")
        for name in names:
            val = scores[name]
            if not isinstance(val, int) or isinstance(val, bool) or not 0 <= val <= 10:
                raise AnswerError(f"score for {name!r} must be an integer in 0..10")
        return {"scores": {name: scores[name] for name in names}}

    @staticmethod
    def _check_demographics(answer: dict) -> dict:
        if not isinstance(answer, dict):
            raise AnswerError("answer must be an object")
        out = {}
        for key in ("gender", "age", "county"):
            val = answer.get(key, "")
            if not isinstance(val, str):
                raise AnswerError(f"{key} must be a string")
            out[key] = val
        return out

    # -- export ---------------------------------------------------------------

    def sessions(self) -> list[SessionState]:
        return list(self._sessions.values())

    def export_records(self) -> list[RespondentRecord]:
        """Completed sessions as survey records; partial sessions are skipped."""
        out = []
        for state in self._sessions.values():
            if state.phase is Phase.DONE:
                out.append(session_to_record(state))
        out.sort(key=lambda r: r.id)
        return out


def _judgment_from_payload(
    state: SessionState, payload: dict, order: int, reversed_presentation: bool = False
) -> Judgment:
    names = [it.name for it in state.items]
    a, b = payload["pair"]
    if names.index(a) > names.index(b):
        a, b = b, a
    preferred_name = payload["preferred"]
    if preferred_name == "neither":
        preferred = Preferred.NEITHER
    else:
        preferred = Preferred.A if preferred_name == a else Preferred.B
    return Judgment(
        pair=(a, b),
        preferred=preferred,
        category=VerbalCategory(payload["category"]),
        presentation_order=order,
        reversed_presentation=reversed_presentation,
    )


def session_to_record(state: SessionState) -> RespondentRecord:
    if state.phase is not Phase.DONE:
        raise ValueError(f"session {state.session_id} is not complete")
    judgments = tuple(
        _judgment_from_payload(state, payload, k + 1)
        for k, payload in enumerate(state.pairwise_answers)
    )
    repeated = _judgment_from_payload(
        state, state.repeat_answer, state.n_pairs + 1, reversed_presentation=True
    )
    demo = state.demographics or {}
    return RespondentRecord(
        id=state.session_id,
        items=tuple(it.name for it in state.items),
        judgments=judgments,
        scores=tuple(state.scores["scores"][it.name] for it in state.items),
        repeated=repeated,
        demographics=Demographics(
            gender=demo.get("gender", ""),
            age=demo.get("age", ""),
            county=demo.get("county", ""),
        ),
    )


@dataclass(frozen=True)
class ExportBundle:
    """Completed sessions plus the protocol metadata needed to audit them."""

    records: tuple[RespondentRecord, ...]
    metadata: tuple[dict, ...]


def export_bundle(store: RecordLog) -> ExportBundle:
    """Everything exportable from a record log (only Done sessions)."""
    service = SurveyService(store)
    records = service.export_records()
    by_id = {s.session_id: s for s in service.sessions()}
    metadata = tuple(
        {
            "session_id": rec.id,
            "seed": by_id[rec.id].seed,
            "created_at": by_id[rec.id].created_at,
            "pair_order": [list(p) for p in by_id[rec.id].pair_order],
        }
        for rec in records
    )
    return ExportBundle(records=tuple(records), metadata=metadata)
