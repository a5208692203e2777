"""Journaled live-trial sessions for decision support.

Investigators record cohort outcomes as they occur; the session always
applies the decision the protocol mandates, so adherence holds by
construction. Every mutation appends a journal entry and nothing is
ever deleted: corrections are ``undone`` markers, and replaying the
journal reproduces the session exactly. Each ``cohort_recorded`` entry
carries the resulting state so replay can detect tampering.
"""

from __future__ import annotations

import json
import os
import uuid
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, List, Optional, Set, Tuple, Union

from .engine import apply_decision, next_decision, stop_recommendation
from .errors import (
    JournalIntegrityError,
    NothingToUndoError,
    TrialConcludedError,
    ValidationError,
)
from .explore import reachable_recommendations
from .model import (
    DEFAULT_CONFIG,
    Decision,
    DecisionEvent,
    EscalationState,
    ProtocolConfig,
    RecommendationEvent,
    StateEvent,
    TrialPath,
    all_zero_state,
)
from .textform import format_state

ACTIVE = "active"
CONCLUDED = "concluded"


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass(frozen=True)
class JournalEntry:
    """One append-only journal line.

    ``kind`` is one of ``created`` (carries doses and config),
    ``cohort_recorded`` (carries the mandated decision, the observed
    cohort, and the resulting state) and ``undone`` (references the
    seq of an earlier cohort_recorded entry).
    """

    seq: int
    timestamp: str
    kind: str
    doses: Optional[int] = None
    cohort_sizes: Optional[Tuple[int, ...]] = None
    max_denominator: Optional[int] = None
    max_doses: Optional[int] = None
    decision: Optional[Decision] = None
    size: Optional[int] = None
    dlts: Optional[int] = None
    state_text: Optional[str] = None
    target_seq: Optional[int] = None

    def to_json(self) -> dict:
        obj = {"seq": self.seq, "ts": self.timestamp, "kind": self.kind}
        if self.kind == "created":
            obj["doses"] = self.doses
            obj["cohort_sizes"] = list(self.cohort_sizes or ())
            obj["max_denominator"] = self.max_denominator
            obj["max_doses"] = self.max_doses
        elif self.kind == "cohort_recorded":
            obj["decision"] = self.decision.value if self.decision else None
            obj["size"] = self.size
            obj["dlts"] = self.dlts
            obj["state"] = self.state_text
        elif self.kind == "undone":
            obj["target"] = self.target_seq
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> "JournalEntry":
        try:
            kind = obj["kind"]
            entry = cls(
                seq=int(obj["seq"]),
                timestamp=str(obj.get("ts", "")),
                kind=kind,
            )
            if kind == "created":
                return replace(
                    entry,
                    doses=int(obj["doses"]),
                    cohort_sizes=tuple(int(c) for c in obj["cohort_sizes"]),
                    max_denominator=int(obj["max_denominator"]),
                    max_doses=int(obj["max_doses"]),
                )
            if kind == "cohort_recorded":
                return replace(
                    entry,
                    decision=Decision.from_code(obj["decision"]),
                    size=int(obj["size"]),
                    dlts=int(obj["dlts"]),
                    state_text=str(obj["state"]),
                )
            if kind == "undone":
                return replace(entry, target_seq=int(obj["target"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise JournalIntegrityError(f"malformed journal entry: {obj!r}") from exc
        raise JournalIntegrityError(f"unknown journal entry kind {kind!r}")


@dataclass(frozen=True)
class TrialSession:
    """Immutable snapshot of one live trial."""

    id: str
    config: ProtocolConfig
    initial: EscalationState
    state: EscalationState
    status: str
    recommendation: Optional[int]
    journal: Tuple[JournalEntry, ...]

    @property
    def concluded(self) -> bool:
        return self.status == CONCLUDED

    @property
    def mandated_decision(self) -> Decision:
        return next_decision(self.state, self.config)

    def effective_records(self) -> Tuple[JournalEntry, ...]:
        """cohort_recorded entries that have not been undone, in order."""
        undone: Set[int] = {
            e.target_seq for e in self.journal if e.kind == "undone"
        }
        return tuple(
            e
            for e in self.journal
            if e.kind == "cohort_recorded" and e.seq not in undone
        )

    def realized_events(self) -> Tuple:
        """The event sequence walked so far; a full path once concluded."""
        events: List = []
        state = self.initial
        for record in self.effective_records():
            events.append(DecisionEvent(record.decision))
            state = apply_decision(
                state, record.decision, record.size, record.dlts, self.config
            )
            events.append(StateEvent(state))
        if self.concluded:
            events.append(DecisionEvent(Decision.STOP))
            events.append(RecommendationEvent(self.recommendation))
        return tuple(events)

    def realized_path(self) -> TrialPath:
        if not self.concluded:
            raise ValidationError("trial has not concluded; no complete path yet")
        return TrialPath(events=self.realized_events())


def _status_for(
    state: EscalationState, config: ProtocolConfig
) -> Tuple[str, Optional[int]]:
    if next_decision(state, config) is Decision.STOP:
        return CONCLUDED, stop_recommendation(state)
    return ACTIVE, None


def create_trial(
    config: ProtocolConfig = DEFAULT_CONFIG,
    doses: int = 3,
    trial_id: Optional[str] = None,
) -> TrialSession:
    """Open a fresh trial: all doses unenrolled, dose 1 current."""
    initial = all_zero_state(doses, config)
    status, rec = _status_for(initial, config)
    created = JournalEntry(
        seq=0,
        timestamp=_now(),
        kind="created",
        doses=doses,
        cohort_sizes=config.cohort_sizes,
        max_denominator=config.max_denominator,
        max_doses=config.max_doses,
    )
    return TrialSession(
        id=trial_id or uuid.uuid4().hex[:12],
        config=config,
        initial=initial,
        state=initial,
        status=status,
        recommendation=rec,
        journal=(created,),
    )


def record_cohort(session: TrialSession, size: int, dlts: int) -> TrialSession:
    """Record one completed cohort under the mandated decision."""
    if session.concluded:
        raise TrialConcludedError(
            f"trial concluded with recommendation {session.recommendation}"
        )
    decision = session.mandated_decision
    new_state = apply_decision(session.state, decision, size, dlts, session.config)
    status, rec = _status_for(new_state, session.config)
    entry = JournalEntry(
        seq=session.journal[-1].seq + 1,
        timestamp=_now(),
        kind="cohort_recorded",
        decision=decision,
        size=size,
        dlts=dlts,
        state_text=format_state(new_state),
    )
    return replace(
        session,
        state=new_state,
        status=status,
        recommendation=rec,
        journal=session.journal + (entry,),
    )


def undo_last(session: TrialSession) -> TrialSession:
    """Append an undo marker for the latest live record and recompute."""
    records = session.effective_records()
    if not records:
        raise NothingToUndoError("no recorded cohort remains to undo")
    marker = JournalEntry(
        seq=session.journal[-1].seq + 1,
        timestamp=_now(),
        kind="undone",
        target_seq=records[-1].seq,
    )
    journal = session.journal + (marker,)
    return _rebuild(session.id, session.config, session.initial, journal)


def _rebuild(
    trial_id: str,
    config: ProtocolConfig,
    initial: EscalationState,
    journal: Tuple[JournalEntry, ...],
) -> TrialSession:
    """Recompute state and status by replaying the journal's live records."""
    session = TrialSession(
        id=trial_id,
        config=config,
        initial=initial,
        state=initial,
        status=ACTIVE,
        recommendation=None,
        journal=journal,
    )
    state = initial
    for record in session.effective_records():
        mandated = next_decision(state, config)
        if mandated is not record.decision:
            raise JournalIntegrityError(
                f"entry {record.seq} records decision {record.decision.value!r} "
                f"but the protocol mandates {mandated.value!r}"
            )
        state = apply_decision(state, record.decision, record.size, record.dlts, config)
        if record.state_text != format_state(state):
            raise JournalIntegrityError(
                f"entry {record.seq} records state {record.state_text!r} but replay "
                f"reaches {format_state(state)!r}"
            )
    status, rec = _status_for(state, config)
    return replace(session, state=state, status=status, recommendation=rec)


def replay_journal(
    entries: Iterable[Union[JournalEntry, dict]],
    config: Optional[ProtocolConfig] = None,
) -> TrialSession:
    """Reconstruct a session from journal entries (objects or JSON dicts).

    The first entry must be ``created``; its config fields win unless an
    explicit ``config`` is passed (whose regret rules then apply). Replay
    verifies each recorded resulting state and raises
    JournalIntegrityError on any divergence.
    """
    parsed = [
        e if isinstance(e, JournalEntry) else JournalEntry.from_json(e)
        for e in entries
    ]
    if not parsed or parsed[0].kind != "created":
        raise JournalIntegrityError("journal must start with a created entry")
    created = parsed[0]
    for previous, current in zip(parsed, parsed[1:]):
        if current.seq <= previous.seq:
            raise JournalIntegrityError(
                f"journal seq must increase (got {previous.seq} then {current.seq})"
            )
        if current.kind == "created":
            raise JournalIntegrityError("created entry must be unique and first")
    record_seqs = {e.seq for e in parsed if e.kind == "cohort_recorded"}
    for e in parsed:
        if e.kind == "undone" and e.target_seq not in record_seqs:
            raise JournalIntegrityError(
                f"undone entry {e.seq} targets unknown record {e.target_seq}"
            )
    if config is None:
        config = ProtocolConfig(
            cohort_sizes=created.cohort_sizes,
            max_denominator=created.max_denominator,
            max_doses=created.max_doses,
        )
    initial = all_zero_state(created.doses, config)
    return _rebuild(uuid.uuid4().hex[:12], config, initial, tuple(parsed))


@dataclass(frozen=True)
class TrialStatus:
    """Read-only status view assembled for interfaces."""

    id: str
    state: EscalationState
    status: str
    recommendation: Optional[int]
    next_decision: Decision
    reachable_recommendations: Tuple[int, ...]
    doses: int
    cohort_sizes: Tuple[int, ...]
    journal: Tuple[JournalEntry, ...]
    records_live: int


def trial_status(session: TrialSession) -> TrialStatus:
    """Status view: state, mandated decision, conclusion, reachable
    recommendations, and a journal summary."""
    recs = sorted(reachable_recommendations(session.state, config=session.config))
    return TrialStatus(
        id=session.id,
        state=session.state,
        status=session.status,
        recommendation=session.recommendation,
        next_decision=session.mandated_decision,
        reachable_recommendations=tuple(recs),
        doses=session.state.dose_count,
        cohort_sizes=session.config.cohort_sizes,
        journal=session.journal,
        records_live=len(session.effective_records()),
    )


def append_journal_entry(path: Union[str, Path], entry: JournalEntry) -> None:
    """Append one entry to an NDJSON journal file, fsynced for audit."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("a", encoding="utf-8") as f:
        f.write(json.dumps(entry.to_json()) + "\n")
        f.flush()
        os.fsync(f.fileno())


def read_journal(path: Union[str, Path]) -> List[JournalEntry]:
    """Load all entries from an NDJSON journal file."""
    entries: List[JournalEntry] = []
    with Path(path).open("r", encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise JournalIntegrityError(
                    f"journal line {line_number} is not valid JSON"
                ) from exc
            entries.append(JournalEntry.from_json(obj))
    return entries
