"""Core value types for 3+3 dose-escalation trials.

A dose is summarized by a cumulative toxicity tally t/n: t dose-limiting
toxicities among n patients enrolled there. The trial state is a zipper
over the dose ladder: ``lower`` lists the current dose and everything
below it in descending dose order, ``higher`` lists the doses above in
ascending order. All values here are immutable; transitions build new
states.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Sequence, Tuple, Union

from .errors import ValidationError
from .rules import RegretRuleSet


class Tally(NamedTuple):
    """Cumulative DLT count ``t`` out of ``n`` patients at one dose."""

    t: int
    n: int

    def __str__(self) -> str:
        return f"{self.t}/{self.n}"


class EscalationState(NamedTuple):
    """Zipper over the dose ladder.

    ``lower[0]`` is the current dose; ``lower`` descends from there.
    ``higher[0]`` is the next-higher dose; ``higher`` ascends.
    """

    lower: Tuple[Tally, ...]
    higher: Tuple[Tally, ...]

    @property
    def current(self) -> Tally:
        if not self.lower:
            raise ValidationError("state has no current dose (lower side is empty)")
        return self.lower[0]

    @property
    def current_level(self) -> int:
        """1-based dose level of the current dose; 0 if there is none."""
        return len(self.lower)

    @property
    def dose_count(self) -> int:
        return len(self.lower) + len(self.higher)


class Decision(Enum):
    """The four protocol decisions. Values are the canonical text codes."""

    ESCALATE = "esc"
    STAY = "sta"
    DEESCALATE = "des"
    STOP = "stop"

    @classmethod
    def from_code(cls, code: str) -> "Decision":
        for member in cls:
            if member.value == code:
                return member
        raise ValidationError(f"unknown decision code {code!r}")


#: Decisions that enroll a cohort, in cascade preference order.
ENROLLING_DECISIONS = (Decision.ESCALATE, Decision.STAY, Decision.DEESCALATE)


@dataclass(frozen=True)
class ProtocolConfig:
    """Protocol parameters with classical 3+3 defaults."""

    cohort_sizes: Tuple[int, ...] = (3,)
    max_denominator: int = 6
    max_doses: int = 8
    regret_rules: RegretRuleSet = RegretRuleSet()

    def __post_init__(self) -> None:
        object.__setattr__(self, "cohort_sizes", tuple(self.cohort_sizes))
        if not self.cohort_sizes:
            raise ValidationError("cohort_sizes must be non-empty")
        for c in self.cohort_sizes:
            if not isinstance(c, int) or c < 1:
                raise ValidationError(f"cohort sizes must be integers >= 1 (got {c!r})")
        if self.max_denominator < max(self.cohort_sizes):
            raise ValidationError(
                f"max_denominator={self.max_denominator} must be >= the largest "
                f"cohort size ({max(self.cohort_sizes)})"
            )
        if self.max_doses < 1:
            raise ValidationError(f"max_doses must be >= 1 (got {self.max_doses})")


DEFAULT_CONFIG = ProtocolConfig()

#: Rolling-enrollment variant: cohorts may close at 3, 2 or a single patient.
ROLLING_CONFIG = ProtocolConfig(cohort_sizes=(3, 2, 1))


def validate_tally(t: int, n: int, config: ProtocolConfig = DEFAULT_CONFIG) -> Tally:
    """Check tally bounds and return the tally, or raise ValidationError."""
    if not isinstance(t, int) or not isinstance(n, int):
        raise ValidationError(f"tally fields must be integers (got {t!r}/{n!r})")
    if t < 0:
        raise ValidationError(f"t must be >= 0 (got {t})")
    if t > n:
        raise ValidationError(f"t must be <= n (got {t}/{n})")
    if n > config.max_denominator:
        raise ValidationError(
            f"n must be <= max_denominator={config.max_denominator} (got {n})"
        )
    return Tally(t, n)


def validate_state(
    state: EscalationState, config: ProtocolConfig = DEFAULT_CONFIG
) -> EscalationState:
    """Check state invariants and return the state, or raise ValidationError."""
    total = state.dose_count
    if total < 1:
        raise ValidationError("state must hold at least one dose")
    if total > config.max_doses:
        raise ValidationError(
            f"state holds {total} doses, more than max_doses={config.max_doses}"
        )
    for q in state.lower + state.higher:
        validate_tally(q.t, q.n, config)
    return state


def make_state(
    tallies: Sequence[Tally],
    current_index: int,
    config: ProtocolConfig = DEFAULT_CONFIG,
) -> EscalationState:
    """Build a zipper state from an ascending tally list and a 1-based index."""
    if not tallies:
        raise ValidationError("tally list must be non-empty")
    if not 1 <= current_index <= len(tallies):
        raise ValidationError(
            f"current_index must be in 1..{len(tallies)} (got {current_index})"
        )
    state = EscalationState(
        lower=tuple(reversed(tallies[:current_index])),
        higher=tuple(tallies[current_index:]),
    )
    return validate_state(state, config)


def state_tallies(
    state: EscalationState, config: ProtocolConfig = DEFAULT_CONFIG
) -> Tuple[Tally, ...]:
    """Flatten a state to its tally list in ascending dose order."""
    validate_state(state, config)
    return tuple(reversed(state.lower)) + state.higher


def all_zero_state(doses: int, config: ProtocolConfig = DEFAULT_CONFIG) -> EscalationState:
    """Fresh-trial state: ``doses`` unenrolled levels with dose 1 current."""
    if not 1 <= doses <= config.max_doses:
        raise ValidationError(f"doses must be in 1..{config.max_doses} (got {doses})")
    return EscalationState(lower=(Tally(0, 0),), higher=(Tally(0, 0),) * (doses - 1))


@dataclass(frozen=True)
class DecisionEvent:
    decision: Decision


@dataclass(frozen=True)
class StateEvent:
    state: EscalationState


@dataclass(frozen=True)
class RecommendationEvent:
    dose: int


PathEvent = Union[DecisionEvent, StateEvent, RecommendationEvent]


@dataclass(frozen=True)
class TrialPath:
    """One complete admissible trial: alternating decision and state events,
    terminated by a stop decision and a single dose recommendation.

    Construction does not validate, so malformed sequences can be built
    and fed to the checkers; use :meth:`problems` or :meth:`validate`.
    """

    events: Tuple[PathEvent, ...]

    @property
    def recommendation(self) -> Union[int, None]:
        if self.events and isinstance(self.events[-1], RecommendationEvent):
            return self.events[-1].dose
        return None

    def states(self) -> Tuple[EscalationState, ...]:
        return tuple(e.state for e in self.events if isinstance(e, StateEvent))

    def decisions(self) -> Tuple[Decision, ...]:
        return tuple(e.decision for e in self.events if isinstance(e, DecisionEvent))

    def final_state(self, initial: EscalationState) -> EscalationState:
        """Last state reached, falling back to ``initial`` for stop-only paths."""
        visited = self.states()
        return visited[-1] if visited else initial

    def problems(self) -> Tuple[str, ...]:
        """Structural violations, empty when the path is well-formed."""
        found = []
        evs = self.events
        recs = [i for i, e in enumerate(evs) if isinstance(e, RecommendationEvent)]
        if len(recs) != 1:
            found.append(f"expected exactly one recommendation event, found {len(recs)}")
        elif recs[0] != len(evs) - 1:
            found.append(
                f"events continue after the recommendation at index {recs[0]}"
            )
        if len(evs) < 2:
            found.append("path must end with a stop decision and a recommendation")
        else:
            stop = evs[-2]
            if not (isinstance(stop, DecisionEvent) and stop.decision is Decision.STOP):
                found.append("recommendation must be preceded by a stop decision")
        for i, e in enumerate(evs[:-2]):
            expected = DecisionEvent if i % 2 == 0 else StateEvent
            if not isinstance(e, expected):
                found.append(
                    f"event {i} should be a {expected.__name__}, got {type(e).__name__}"
                )
                break
        return tuple(found)

    def validate(self) -> "TrialPath":
        problems = self.problems()
        if problems:
            raise ValidationError("; ".join(problems))
        return self
