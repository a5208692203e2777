"""Decision semantics of the regret-constrained 3+3 protocol.

Everything here is a pure function of immutable inputs. The decision
cascade prefers escalation, then staying, then de-escalation, and takes
the first option that is both feasible (some valid enrollment exists)
and free of anticipatory regret (no conceivable cohort outcome would be
regretted under the configured rule set). When nothing survives, the
trial stops and recommends a dose.

Two outcome enumerations exist side by side and differ on purpose:

* :func:`outcome_tallies` lists outcomes of enrollments that are
  actually permitted, i.e. those keeping the dose within the per-dose
  patient cap. Transitions, path branching and what-if projections use
  this one.
* :func:`anticipated_tallies` lists every outcome any configured cohort
  could conceivably produce, cap ignored. Regret anticipation quantifies
  over this larger set: a decision is judged by the worst cohort that
  could show up at the door, not merely by the enrollments a site would
  be allowed to complete.
"""

from __future__ import annotations

from typing import List, NamedTuple, Optional

from .errors import InfeasibleDecisionError, ValidationError
from .model import (
    DEFAULT_CONFIG,
    Decision,
    ENROLLING_DECISIONS,
    EscalationState,
    ProtocolConfig,
    Tally,
    validate_tally,
)
from .rules import RegretRuleSet


class DecisionHistory(NamedTuple):
    """A resulting tally paired with the tally that preceded the decision."""

    result: Tally
    prior: Tally


def cohort_outcomes(size: int) -> List[Tally]:
    """The ``size + 1`` tallies one cohort can produce, worst first."""
    if size < 1:
        raise ValidationError(f"cohort size must be >= 1 (got {size})")
    return [Tally(d, size) for d in range(size, -1, -1)]


def anticipated_tallies(
    prior: Tally, config: ProtocolConfig = DEFAULT_CONFIG
) -> List[Tally]:
    """All tallies a new cohort could conceivably leave at a dose.

    Concatenates, per configured cohort size in order, that cohort's
    outcomes added to ``prior``. Outcomes that would overrun the
    per-dose cap are included: this is the anticipation set regret is
    evaluated over, not the set of permitted enrollments.
    """
    validate_tally(prior.t, prior.n, config)
    out = []
    for size in config.cohort_sizes:
        for q in cohort_outcomes(size):
            out.append(Tally(prior.t + q.t, prior.n + q.n))
    return out


def outcome_tallies(prior: Tally, config: ProtocolConfig = DEFAULT_CONFIG) -> List[Tally]:
    """Tallies reachable from ``prior`` by one permitted enrollment.

    Same enumeration as :func:`anticipated_tallies` but restricted to
    outcomes whose denominator stays within ``config.max_denominator``;
    the excluded entries correspond to no valid enrollment.
    """
    return [
        q for q in anticipated_tallies(prior, config) if q.n <= config.max_denominator
    ]


def enroll_transitions(
    prior: Tally, config: ProtocolConfig = DEFAULT_CONFIG
) -> List[Tally]:
    """The one-dose transition relation: alias of :func:`outcome_tallies`."""
    return outcome_tallies(prior, config)


def enrolled_dose_tally(state: EscalationState, decision: Decision) -> Tally:
    """Tally of the dose a decision would enroll into.

    Raises InfeasibleDecisionError when the state has no such dose:
    escalating with nothing above, de-escalating with nothing below, or
    any enrolling decision without a current dose.
    """
    if decision is Decision.ESCALATE:
        if not state.higher:
            raise InfeasibleDecisionError("cannot escalate above the highest dose")
        return state.higher[0]
    if decision is Decision.STAY:
        if not state.lower:
            raise InfeasibleDecisionError("cannot stay: state has no current dose")
        return state.lower[0]
    if decision is Decision.DEESCALATE:
        if len(state.lower) < 2:
            raise InfeasibleDecisionError("cannot de-escalate below the lowest dose")
        return state.lower[1]
    raise InfeasibleDecisionError("stop does not enroll a dose")


def infeasible(
    state: EscalationState,
    decision: Decision,
    config: ProtocolConfig = DEFAULT_CONFIG,
) -> bool:
    """True iff no valid successor state exists for the decision.

    Covers the structural cases (no dose above or below) and the
    enrollment cap: a decision whose target dose cannot take even the
    smallest configured cohort is infeasible. Complementary, by
    construction, to the existence of an apply_decision successor.
    """
    try:
        target = enrolled_dose_tally(state, decision)
    except InfeasibleDecisionError:
        return True
    return not any(target.n + c <= config.max_denominator for c in config.cohort_sizes)


def apply_decision(
    state: EscalationState,
    decision: Decision,
    observed_size: int,
    observed_dlts: int,
    config: ProtocolConfig = DEFAULT_CONFIG,
) -> EscalationState:
    """Take an enrolling decision with an observed cohort outcome.

    Escalation enrolls the next-higher dose, which becomes current.
    Staying re-enrolls the current dose. De-escalation parks the current
    dose on the higher side and enrolls the dose below, which becomes
    current.
    """
    if decision not in ENROLLING_DECISIONS:
        raise InfeasibleDecisionError(f"{decision} does not enroll a cohort")
    if observed_size not in config.cohort_sizes:
        raise ValidationError(
            f"cohort size {observed_size} not among allowed sizes "
            f"{list(config.cohort_sizes)}"
        )
    if not 0 <= observed_dlts <= observed_size:
        raise ValidationError(
            f"dlts must be in 0..{observed_size} (got {observed_dlts})"
        )
    target = enrolled_dose_tally(state, decision)
    if target.n + observed_size > config.max_denominator:
        raise InfeasibleDecisionError(
            f"enrolling {observed_size} at tally {target} would exceed "
            f"max_denominator={config.max_denominator}"
        )
    new = Tally(target.t + observed_dlts, target.n + observed_size)
    if decision is Decision.ESCALATE:
        return EscalationState(lower=(new,) + state.lower, higher=state.higher[1:])
    if decision is Decision.STAY:
        return EscalationState(lower=(new,) + state.lower[1:], higher=state.higher)
    return EscalationState(
        lower=(new,) + state.lower[2:], higher=(state.lower[0],) + state.higher
    )


def decision_histories(
    state: EscalationState,
    decision: Decision,
    config: ProtocolConfig = DEFAULT_CONFIG,
) -> List[DecisionHistory]:
    """Anticipated (result, prior) tally pairs for an enrolling decision.

    The prior is always the current dose's tally; the results run over
    :func:`anticipated_tallies` of the dose being enrolled, in outcome
    order.
    """
    target = enrolled_dose_tally(state, decision)
    prior = state.current
    return [
        DecisionHistory(result=q, prior=prior)
        for q in anticipated_tallies(target, config)
    ]


def regrets(
    decision: Decision,
    history: DecisionHistory,
    rules: Optional[RegretRuleSet] = None,
) -> bool:
    """Whether a realized or anticipated history is regretted."""
    rules = rules if rules is not None else DEFAULT_CONFIG.regret_rules
    clauses = rules.clauses_for(decision)
    return any(c.holds(history.prior, history.result) for c in clauses)


def regrettable(
    state: EscalationState,
    decision: Decision,
    config: ProtocolConfig = DEFAULT_CONFIG,
) -> bool:
    """True iff at least one anticipated history of the decision is regretted.

    Callers must gate on :func:`infeasible` first; a structurally
    impossible decision has no histories and raises.
    """
    return any(
        regrets(decision, h, config.regret_rules)
        for h in decision_histories(state, decision, config)
    )


def next_decision(
    state: EscalationState, config: ProtocolConfig = DEFAULT_CONFIG
) -> Decision:
    """The decision the protocol mandates: first of escalate, stay,
    de-escalate that is neither infeasible nor regrettable, else stop.

    Total over valid states. A state with no current dose admits no
    enrolling decision and therefore stops.
    """
    if not state.lower:
        return Decision.STOP
    for decision in ENROLLING_DECISIONS:
        if infeasible(state, decision, config):
            continue
        if regrettable(state, decision, config):
            continue
        return decision
    return Decision.STOP


def stop_recommendation(state: EscalationState) -> int:
    """Dose level to recommend when the trial stops in this state.

    0 means no dose is recommended. The current dose is recommended
    while its observed DLT rate stays within 1-in-6; past that, the
    next-lower dose is recommended instead.
    """
    if not state.lower:
        return 0
    t, n = state.lower[0]
    if t * 6 > n:
        return len(state.lower) - 1
    return len(state.lower)
