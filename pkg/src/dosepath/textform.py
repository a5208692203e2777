"""Canonical text forms for tallies, states and paths.

The grammar is fixed and whitespace-free so that printed enumerations
can be diffed byte-for-byte:

    tally   :=  T "/" N
    state   :=  "[" tallies "]" "-" "[" tallies "]"      (lower then higher)
    path    :=  "[" event ("," event)* "]."
    event   :=  "esc" | "sta" | "des" | "stop" | state | "recommend_dose(" R ")"

``parse_*`` functions are exact inverses of ``format_*`` and distinguish
syntax errors (ParseError, with position) from domain violations
(ValidationError, e.g. a denominator past the cap).
"""

from __future__ import annotations

from typing import List, Tuple

from .errors import ParseError
from .model import (
    DEFAULT_CONFIG,
    Decision,
    DecisionEvent,
    EscalationState,
    PathEvent,
    ProtocolConfig,
    RecommendationEvent,
    StateEvent,
    Tally,
    TrialPath,
    validate_state,
    validate_tally,
)


def format_tally(tally: Tally) -> str:
    return f"{tally.t}/{tally.n}"


def format_state(state: EscalationState) -> str:
    lower = ",".join(format_tally(q) for q in state.lower)
    higher = ",".join(format_tally(q) for q in state.higher)
    return f"[{lower}]-[{higher}]"


def format_event(event: PathEvent) -> str:
    if isinstance(event, DecisionEvent):
        return event.decision.value
    if isinstance(event, StateEvent):
        return format_state(event.state)
    return f"recommend_dose({event.dose})"


def format_path(path: TrialPath) -> str:
    return "[" + ",".join(format_event(e) for e in path.events) + "]."


class _Scanner:
    """Single-pass cursor over canonical text."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, literal: str) -> None:
        if not self.text.startswith(literal, self.pos):
            raise ParseError(f"expected {literal!r}", self.pos)
        self.pos += len(literal)

    def integer(self) -> int:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise ParseError("expected an integer", start)
        return int(self.text[start : self.pos])

    def at_end(self) -> bool:
        return self.pos >= len(self.text)

    def fail_unless_done(self) -> None:
        if not self.at_end():
            raise ParseError("unexpected trailing text", self.pos)


def _scan_tally(s: _Scanner, config: ProtocolConfig) -> Tally:
    t = s.integer()
    s.expect("/")
    n = s.integer()
    return validate_tally(t, n, config)


def _scan_tally_list(s: _Scanner, config: ProtocolConfig) -> List[Tally]:
    s.expect("[")
    tallies: List[Tally] = []
    if s.peek() != "]":
        tallies.append(_scan_tally(s, config))
        while s.peek() == ",":
            s.expect(",")
            tallies.append(_scan_tally(s, config))
    s.expect("]")
    return tallies


def _scan_state(s: _Scanner, config: ProtocolConfig) -> EscalationState:
    lower = _scan_tally_list(s, config)
    s.expect("-")
    higher = _scan_tally_list(s, config)
    state = EscalationState(lower=tuple(lower), higher=tuple(higher))
    return validate_state(state, config)


def parse_tally(text: str, config: ProtocolConfig = DEFAULT_CONFIG) -> Tally:
    s = _Scanner(text)
    tally = _scan_tally(s, config)
    s.fail_unless_done()
    return tally


def parse_state(text: str, config: ProtocolConfig = DEFAULT_CONFIG) -> EscalationState:
    s = _Scanner(text)
    state = _scan_state(s, config)
    s.fail_unless_done()
    return state


_DECISION_CODES = {d.value: d for d in Decision}


def _scan_event(s: _Scanner, config: ProtocolConfig) -> PathEvent:
    if s.peek() == "[":
        return StateEvent(_scan_state(s, config))
    if s.text.startswith("recommend_dose(", s.pos):
        s.expect("recommend_dose(")
        dose = s.integer()
        s.expect(")")
        return RecommendationEvent(dose)
    for code in ("stop", "esc", "sta", "des"):
        if s.text.startswith(code, s.pos):
            s.pos += len(code)
            return DecisionEvent(_DECISION_CODES[code])
    raise ParseError("expected a decision, state or recommendation", s.pos)


def parse_path(text: str, config: ProtocolConfig = DEFAULT_CONFIG) -> TrialPath:
    """Parse one canonical path line, validating structure and values."""
    s = _Scanner(text)
    s.expect("[")
    events: List[PathEvent] = []
    if s.peek() != "]":
        events.append(_scan_event(s, config))
        while s.peek() == ",":
            s.expect(",")
            events.append(_scan_event(s, config))
    s.expect("]")
    s.expect(".")
    s.fail_unless_done()
    return TrialPath(events=tuple(events)).validate()


def path_sort_key(path: TrialPath) -> str:
    return format_path(path)


def sorted_paths(paths) -> Tuple[TrialPath, ...]:
    """Paths in canonical text order, the package's stable listing order."""
    return tuple(sorted(paths, key=path_sort_key))
