"""Bounded checking of protocol properties over exhaustive enumerations.

Each checker walks every admissible path for each ladder size in the
requested range and reports concrete counterexamples; an empty report
means the property holds over that bound. Counterexamples carry the
offending path so they can be replayed step by step.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Tuple

from .engine import infeasible, next_decision, regrettable, stop_recommendation
from .errors import InfeasibleDecisionError
from .model import (
    DEFAULT_CONFIG,
    Decision,
    ENROLLING_DECISIONS,
    EscalationState,
    ProtocolConfig,
    RecommendationEvent,
    StateEvent,
    TrialPath,
    all_zero_state,
    state_tallies,
)
from .explore import iter_paths, reachable_states
from .textform import format_state

#: A recommendation at or above a dose that tallied this many DLTs is unsafe.
MTD_EXCEEDED_DLTS = 2

#: Full support for a recommended dose: this many patients, rate within 1-in-6.
MTD_SUPPORT_PATIENTS = 6

#: No single dose may ever accumulate this many DLTs.
DLT_CAP = 5


@dataclass(frozen=True)
class Counterexample:
    doses: int
    path: TrialPath
    witness: str


@dataclass(frozen=True)
class PropertyReport:
    property_name: str
    doses_checked: Tuple[int, ...]
    counterexamples: Tuple[Counterexample, ...]
    paths_examined: int
    elapsed_seconds: float

    @property
    def holds(self) -> bool:
        return not self.counterexamples


def safety_violation(path: TrialPath) -> Optional[str]:
    """Witness when the final recommendation reaches a dose level whose
    tally showed the MTD was exceeded, else None."""
    rec = path.recommendation
    if rec is None:
        return None
    for event in path.events:
        if isinstance(event, StateEvent) and event.state.lower:
            level = len(event.state.lower)
            toxicities = event.state.lower[0].t
            if toxicities >= MTD_EXCEEDED_DLTS and rec >= level:
                return (
                    f"state {format_state(event.state)} put {toxicities} DLTs at "
                    f"dose level {level}, yet the trial recommended dose {rec}"
                )
    return None


def liveness_violation(path: TrialPath) -> Optional[str]:
    """Witness when a path fails to conclude with a single terminal
    recommendation, else None."""
    recs = [i for i, e in enumerate(path.events) if isinstance(e, RecommendationEvent)]
    if not recs:
        return "path has no recommendation event"
    if len(recs) > 1:
        return f"path has {len(recs)} recommendation events"
    if recs[0] != len(path.events) - 1:
        return f"events continue after the recommendation at index {recs[0]}"
    return None


def dlt_cap_violation(path: TrialPath) -> Optional[str]:
    """Witness when any dose in any visited state reaches the DLT cap."""
    for event in path.events:
        if isinstance(event, StateEvent):
            for q in event.state.lower + event.state.higher:
                if q.t >= DLT_CAP:
                    return (
                        f"state {format_state(event.state)} holds tally {q} with "
                        f"{q.t} DLTs at one dose"
                    )
    return None


def mtd_support_violation(
    path: TrialPath, initial: EscalationState
) -> Optional[str]:
    """Witness when a recommended dose lacks full support: fewer than
    6 patients there, or an observed DLT rate above 1-in-6."""
    rec = path.recommendation
    if rec is None or rec < 1:
        return None
    final = path.final_state(initial)
    tallies = state_tallies(final)
    if rec > len(tallies):
        return f"recommendation {rec} exceeds the {len(tallies)}-dose ladder"
    q = tallies[rec - 1]
    if q.n < MTD_SUPPORT_PATIENTS:
        return f"recommended dose {rec} has only {q.n} patients (tally {q})"
    if q.t * 6 > q.n:
        return f"recommended dose {rec} has tally {q}, a DLT rate above 1-in-6"
    return None


def _check_paths(
    name: str,
    dose_range: Iterable[int],
    config: ProtocolConfig,
    violation: Callable[[TrialPath, EscalationState], Optional[str]],
) -> PropertyReport:
    started = time.perf_counter()
    doses_checked = tuple(dose_range)
    counterexamples = []
    examined = 0
    for doses in doses_checked:
        initial = all_zero_state(doses, config)
        for path in iter_paths(initial, config):
            examined += 1
            witness = violation(path, initial)
            if witness is not None:
                counterexamples.append(Counterexample(doses, path, witness))
    return PropertyReport(
        property_name=name,
        doses_checked=doses_checked,
        counterexamples=tuple(counterexamples),
        paths_examined=examined,
        elapsed_seconds=time.perf_counter() - started,
    )


def check_safety(
    dose_range: Iterable[int], config: ProtocolConfig = DEFAULT_CONFIG
) -> PropertyReport:
    return _check_paths(
        "safety", dose_range, config, lambda p, _initial: safety_violation(p)
    )


def check_liveness(
    dose_range: Iterable[int], config: ProtocolConfig = DEFAULT_CONFIG
) -> PropertyReport:
    return _check_paths(
        "liveness", dose_range, config, lambda p, _initial: liveness_violation(p)
    )


def check_dlt_cap(
    dose_range: Iterable[int], config: ProtocolConfig = DEFAULT_CONFIG
) -> PropertyReport:
    return _check_paths(
        "dlt-cap", dose_range, config, lambda p, _initial: dlt_cap_violation(p)
    )


def check_mtd_support(
    dose_range: Iterable[int], config: ProtocolConfig = DEFAULT_CONFIG
) -> PropertyReport:
    return _check_paths("mtd-support", dose_range, config, mtd_support_violation)


def check_determinism(
    dose_range: Iterable[int], config: ProtocolConfig = DEFAULT_CONFIG
) -> PropertyReport:
    """Re-derive the cascade at every reachable state and flag any state
    where the mandated decision is not the unique cascade outcome.

    ``paths_examined`` counts reachable states here.
    """
    started = time.perf_counter()
    doses_checked = tuple(dose_range)
    counterexamples = []
    examined = 0
    for doses in doses_checked:
        initial = all_zero_state(doses, config)
        for state in reachable_states(initial, config):
            examined += 1
            witness = _cascade_mismatch(state, config)
            if witness is not None:
                path = TrialPath(events=(StateEvent(state),))
                counterexamples.append(Counterexample(doses, path, witness))
    return PropertyReport(
        property_name="determinism",
        doses_checked=doses_checked,
        counterexamples=tuple(counterexamples),
        paths_examined=examined,
        elapsed_seconds=time.perf_counter() - started,
    )


def _cascade_mismatch(state: EscalationState, config: ProtocolConfig) -> Optional[str]:
    try:
        mandated = next_decision(state, config)
    except Exception as exc:  # a total decision function must never raise
        return f"next_decision raised {exc!r} at {format_state(state)}"
    survivors = []
    for decision in ENROLLING_DECISIONS:
        try:
            if not infeasible(state, decision, config) and not regrettable(
                state, decision, config
            ):
                survivors.append(decision)
        except InfeasibleDecisionError as exc:
            return f"guards undefined for {decision} at {format_state(state)}: {exc}"
    expected = survivors[0] if survivors else Decision.STOP
    if mandated is not expected:
        return (
            f"cascade at {format_state(state)} admits {survivors or [Decision.STOP]} "
            f"but next_decision returned {mandated}"
        )
    if mandated is Decision.STOP:
        stop_recommendation(state)  # must be defined on every stop state
    return None
