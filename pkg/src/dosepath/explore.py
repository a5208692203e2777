"""Exhaustive enumeration of admissible trial paths and queries over them.

Decisions along a path are always the ones the cascade mandates; only
cohort outcomes branch. Enumeration is therefore a finite tree walk:
every enrollment adds at least one patient and the ladder holds at most
``max_doses * max_denominator`` of them, so termination is structural.

Pattern matching over paths is a tiny, regex-like language: ``Gap``
matches any run of events, the other matchers bind exactly one event.
A pattern with no ``Gap`` only matches the full sequence.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple, Union

from .engine import (
    apply_decision,
    enroll_transitions,
    enrolled_dose_tally,
    next_decision,
    stop_recommendation,
)
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
    all_zero_state,
    validate_state,
)
from .textform import sorted_paths


@dataclass(frozen=True)
class StateTemplate:
    """Partial description of a state; unset fields match anything."""

    current: Optional[Tally] = None
    higher_head: Optional[Tally] = None
    requires_higher: bool = False
    lower: Optional[Tuple[Tally, ...]] = None
    higher: Optional[Tuple[Tally, ...]] = None

    @classmethod
    def exact(cls, state: EscalationState) -> "StateTemplate":
        return cls(lower=state.lower, higher=state.higher)

    def matches(self, state: EscalationState) -> bool:
        if self.current is not None:
            if not state.lower or state.lower[0] != self.current:
                return False
        if self.requires_higher or self.higher_head is not None:
            if not state.higher:
                return False
        if self.higher_head is not None and state.higher[0] != self.higher_head:
            return False
        if self.lower is not None and state.lower != self.lower:
            return False
        if self.higher is not None and state.higher != self.higher:
            return False
        return True


@dataclass(frozen=True)
class Gap:
    """Matches any, possibly empty, subsequence of events."""


@dataclass(frozen=True)
class DecisionIs:
    decision: Decision

    def matches(self, event: PathEvent) -> bool:
        return isinstance(event, DecisionEvent) and event.decision is self.decision


@dataclass(frozen=True)
class AnyDecision:
    """Matches one decision event and captures the decision."""

    def matches(self, event: PathEvent) -> bool:
        return isinstance(event, DecisionEvent)


@dataclass(frozen=True)
class StateMatches:
    template: StateTemplate

    def matches(self, event: PathEvent) -> bool:
        return isinstance(event, StateEvent) and self.template.matches(event.state)


@dataclass(frozen=True)
class RecommendationIs:
    dose: int

    def matches(self, event: PathEvent) -> bool:
        return isinstance(event, RecommendationEvent) and event.dose == self.dose


Matcher = Union[Gap, DecisionIs, AnyDecision, StateMatches, RecommendationIs]


@dataclass(frozen=True)
class PathPattern:
    matchers: Tuple[Matcher, ...]

    def __init__(self, *matchers: Matcher):
        object.__setattr__(self, "matchers", tuple(matchers))


def pattern_matches(
    pattern: PathPattern, events: Sequence[PathEvent]
) -> Iterator[Tuple[Decision, ...]]:
    """All ways the pattern matches, yielding captured decisions per match."""

    def walk(i: int, j: int, captured: Tuple[Decision, ...]):
        if j == len(pattern.matchers):
            if i == len(events):
                yield captured
            return
        m = pattern.matchers[j]
        if isinstance(m, Gap):
            for k in range(i, len(events) + 1):
                yield from walk(k, j + 1, captured)
            return
        if i < len(events) and m.matches(events[i]):
            if isinstance(m, AnyDecision):
                captured = captured + (events[i].decision,)
            yield from walk(i + 1, j + 1, captured)

    return walk(0, 0, ())


class _Explorer:
    """One enumeration run; caches the mandated decision per state."""

    def __init__(self, config: ProtocolConfig):
        self.config = config
        self._decision_cache: Dict[EscalationState, Decision] = {}
        self._step_bound = config.max_doses * config.max_denominator + 1

    def mandated(self, state: EscalationState) -> Decision:
        cached = self._decision_cache.get(state)
        if cached is None:
            cached = next_decision(state, self.config)
            self._decision_cache[state] = cached
        return cached

    def successors(self, state: EscalationState, decision: Decision):
        target = enrolled_dose_tally(state, decision)
        for outcome in enroll_transitions(target, self.config):
            size = outcome.n - target.n
            dlts = outcome.t - target.t
            yield apply_decision(state, decision, size, dlts, self.config)

    def walk(self, state: EscalationState, depth: int = 0) -> Iterator[List[PathEvent]]:
        if depth > self._step_bound:
            raise RuntimeError(
                f"path exceeded the structural bound of {self._step_bound} steps"
            )
        decision = self.mandated(state)
        if decision is Decision.STOP:
            yield [
                DecisionEvent(Decision.STOP),
                RecommendationEvent(stop_recommendation(state)),
            ]
            return
        head = DecisionEvent(decision)
        for nxt in self.successors(state, decision):
            for tail in self.walk(nxt, depth + 1):
                yield [head, StateEvent(nxt)] + tail


def iter_paths(
    initial: EscalationState, config: ProtocolConfig = DEFAULT_CONFIG
) -> Iterator[TrialPath]:
    """Generate every admissible path from ``initial``, in traversal order."""
    validate_state(initial, config)
    explorer = _Explorer(config)
    for events in explorer.walk(initial):
        yield TrialPath(events=tuple(events))


def enumerate_paths(
    initial: EscalationState, config: ProtocolConfig = DEFAULT_CONFIG
) -> Tuple[TrialPath, ...]:
    """All admissible paths from ``initial`` in canonical text order."""
    return sorted_paths(iter_paths(initial, config))


def count_paths(doses: int, config: ProtocolConfig = DEFAULT_CONFIG) -> int:
    """Number of admissible paths from the all-zero start.

    Counts via memoized suffix counts instead of materializing paths,
    so large ladders stay cheap.
    """
    initial = all_zero_state(doses, config)
    explorer = _Explorer(config)
    memo: Dict[EscalationState, int] = {}

    def suffixes(state: EscalationState) -> int:
        cached = memo.get(state)
        if cached is not None:
            return cached
        decision = explorer.mandated(state)
        if decision is Decision.STOP:
            count = 1
        else:
            count = sum(suffixes(nxt) for nxt in explorer.successors(state, decision))
        memo[state] = count
        return count

    return suffixes(initial)


def reachable_states(
    initial: EscalationState, config: ProtocolConfig = DEFAULT_CONFIG
) -> Set[EscalationState]:
    """Every state occurring in any path from ``initial``, plus ``initial``."""
    validate_state(initial, config)
    explorer = _Explorer(config)
    seen = {initial}
    frontier = [initial]
    while frontier:
        state = frontier.pop()
        decision = explorer.mandated(state)
        if decision is Decision.STOP:
            continue
        for nxt in explorer.successors(state, decision):
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return seen


def match_paths(
    initial: EscalationState,
    pattern: PathPattern,
    config: ProtocolConfig = DEFAULT_CONFIG,
) -> Tuple[TrialPath, ...]:
    """Paths from ``initial`` whose event sequence matches the pattern."""
    return tuple(
        p
        for p in enumerate_paths(initial, config)
        if next(iter(pattern_matches(pattern, p.events)), None) is not None
    )


def captured_decisions(
    initial: EscalationState,
    pattern: PathPattern,
    config: ProtocolConfig = DEFAULT_CONFIG,
) -> Set[Decision]:
    """Union of decisions captured by ``AnyDecision`` matchers over all matches."""
    out: Set[Decision] = set()
    for p in iter_paths(initial, config):
        for captured in pattern_matches(pattern, p.events):
            out.update(captured)
    return out


def _with_initial(initial: EscalationState, path: TrialPath) -> List[PathEvent]:
    return [StateEvent(initial), *path.events]


def decisions_at(
    initial: EscalationState,
    template: StateTemplate,
    config: ProtocolConfig = DEFAULT_CONFIG,
) -> Set[Decision]:
    """Decisions immediately following any matching state across all paths.

    The initial state takes part: when it matches, the first decision of
    each path is included.
    """
    out: Set[Decision] = set()
    for p in iter_paths(initial, config):
        events = _with_initial(initial, p)
        for i, e in enumerate(events[:-1]):
            nxt = events[i + 1]
            if (
                isinstance(e, StateEvent)
                and isinstance(nxt, DecisionEvent)
                and template.matches(e.state)
            ):
                out.add(nxt.decision)
    return out


def decisions_preceding(
    initial: EscalationState,
    template: StateTemplate,
    config: ProtocolConfig = DEFAULT_CONFIG,
) -> Set[Decision]:
    """Decisions immediately preceding any matching state across all paths."""
    out: Set[Decision] = set()
    for p in iter_paths(initial, config):
        events = _with_initial(initial, p)
        for i, e in enumerate(events[1:], start=1):
            prev = events[i - 1]
            if (
                isinstance(e, StateEvent)
                and isinstance(prev, DecisionEvent)
                and template.matches(e.state)
            ):
                out.add(prev.decision)
    return out


def reachable_recommendations(
    initial: EscalationState,
    via: Optional[StateTemplate] = None,
    config: ProtocolConfig = DEFAULT_CONFIG,
) -> Set[int]:
    """Final recommendations over all paths, optionally restricted to
    paths passing through a state matching ``via``."""
    out: Set[int] = set()
    for p in iter_paths(initial, config):
        if via is not None:
            visited = [initial, *(s for s in p.states())]
            if not any(via.matches(s) for s in visited):
                continue
        rec = p.recommendation
        if rec is not None:
            out.add(rec)
    return out


def contains_path(
    initial: EscalationState,
    candidate: TrialPath,
    config: ProtocolConfig = DEFAULT_CONFIG,
) -> bool:
    """Whether ``candidate`` is one of the admissible paths from ``initial``.

    Walks the candidate instead of enumerating: each decision must be
    the mandated one, each state a permitted enrollment outcome, and the
    terminal recommendation the stop rule's answer.
    """
    validate_state(initial, config)
    if candidate.problems():
        return False
    events = candidate.events
    state = initial
    i = 0
    while i < len(events) - 2:
        decision_event, state_event = events[i], events[i + 1]
        if not isinstance(decision_event, DecisionEvent) or not isinstance(
            state_event, StateEvent
        ):
            return False
        decision = decision_event.decision
        if next_decision(state, config) is not decision:
            return False
        target = enrolled_dose_tally(state, decision)
        if state_event.state not in {
            apply_decision(state, decision, q.n - target.n, q.t - target.t, config)
            for q in enroll_transitions(target, config)
        }:
            return False
        state = state_event.state
        i += 2
    if next_decision(state, config) is not Decision.STOP:
        return False
    return candidate.recommendation == stop_recommendation(state)
