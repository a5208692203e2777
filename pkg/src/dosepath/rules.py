"""Regret clauses that drive the dose-escalation decision cascade.

A clause is any object with ``holds(prior, result) -> bool``, where both
arguments are tallies: ``prior`` is the tally at the current dose before
the decision and ``result`` is a tally the enrolled dose could end up
with. A decision is regretted when at least one of its clauses holds.

The defaults encode the classical 3+3 judgments: escalation requires at
least 3 prior patients with an observed DLT rate within 1-in-6,
de-escalation from a mildly toxic dose is regretted when the lower dose
turns out clearly tolerable, and no dose may ever accumulate 5 DLTs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Protocol, Tuple

if TYPE_CHECKING:
    from .model import Decision, Tally


class RegretClause(Protocol):
    def holds(self, prior: "Tally", result: "Tally") -> bool: ...


@dataclass(frozen=True)
class UnjustifiedEscalation:
    """Regret escalating unless the prior dose earned it.

    Escalation is justified only when the current dose has enrolled at
    least ``min_prior_enrollment`` patients and its DLT rate does not
    exceed ``1/rate_denominator``. Absent that justification, any
    escalation is regretted regardless of how the new cohort fares.
    """

    min_prior_enrollment: int = 3
    rate_denominator: int = 6

    def holds(self, prior: "Tally", result: "Tally") -> bool:
        justified = (
            prior.n >= self.min_prior_enrollment
            and prior.t * self.rate_denominator <= prior.n
        )
        return not justified


@dataclass(frozen=True)
class ExcessToxicity:
    """Regret any decision that lets one dose accumulate ``cap`` DLTs.

    A correctly run 3+3 trial never records more than ``cap - 1`` DLTs
    at a single dose level, so reaching the cap is regrettable for every
    decision kind.
    """

    cap: int = 5

    def holds(self, prior: "Tally", result: "Tally") -> bool:
        return result.t >= self.cap


@dataclass(frozen=True)
class OvercautiousDeescalation:
    """Regret retreating from a mildly toxic dose to a clearly safe one.

    Holds when the dose stepped away from was only moderately toxic
    (at most ``max_prior_toxicities`` DLTs in at least
    ``min_prior_enrollment`` patients) and the lower dose then shows a
    net DLT rate strictly below ``1/rate_denominator``: the de-escalation
    cost patients a viable dose.
    """

    max_prior_toxicities: int = 1
    min_prior_enrollment: int = 3
    rate_denominator: int = 6

    def holds(self, prior: "Tally", result: "Tally") -> bool:
        return (
            prior.t <= self.max_prior_toxicities
            and prior.n >= self.min_prior_enrollment
            and result.n > 0
            and result.t * self.rate_denominator < result.n
        )


def _default_escalate() -> Tuple[RegretClause, ...]:
    return (UnjustifiedEscalation(), ExcessToxicity())


def _default_stay() -> Tuple[RegretClause, ...]:
    return (ExcessToxicity(),)


def _default_deescalate() -> Tuple[RegretClause, ...]:
    return (OvercautiousDeescalation(), ExcessToxicity())


@dataclass(frozen=True)
class RegretRuleSet:
    """Per-decision disjunctions of regret clauses."""

    escalate: Tuple[RegretClause, ...] = field(default_factory=_default_escalate)
    stay: Tuple[RegretClause, ...] = field(default_factory=_default_stay)
    deescalate: Tuple[RegretClause, ...] = field(default_factory=_default_deescalate)

    @classmethod
    def default(cls) -> "RegretRuleSet":
        return cls()

    def clauses_for(self, decision: "Decision") -> Tuple[RegretClause, ...]:
        from .model import Decision

        if decision is Decision.ESCALATE:
            return self.escalate
        if decision is Decision.STAY:
            return self.stay
        if decision is Decision.DEESCALATE:
            return self.deescalate
        raise ValueError(f"no regret clauses exist for decision {decision!r}")

    def without_dlt_cap(self) -> "RegretRuleSet":
        """Rule set with every ExcessToxicity clause removed.

        Deliberately weaker than the default; used to demonstrate that
        the property checkers detect unsafe rule sets.
        """

        def strip(clauses: Tuple[RegretClause, ...]) -> Tuple[RegretClause, ...]:
            return tuple(c for c in clauses if not isinstance(c, ExcessToxicity))

        return RegretRuleSet(
            escalate=strip(self.escalate),
            stay=strip(self.stay),
            deescalate=strip(self.deescalate),
        )
