"""Executable engine for the 3+3 oncology dose-escalation protocol.

Decisions are derived from anticipatory-regret constraints; all
admissible trial paths can be enumerated exhaustively, protocol
properties checked over bounded ladders, and live trials run as
journaled decision-support sessions over a CLI and HTTP API.
"""

from .engine import (
    DecisionHistory,
    anticipated_tallies,
    apply_decision,
    cohort_outcomes,
    decision_histories,
    enroll_transitions,
    enrolled_dose_tally,
    infeasible,
    next_decision,
    outcome_tallies,
    regrets,
    regrettable,
    stop_recommendation,
)
from .errors import (
    DosePathError,
    InfeasibleDecisionError,
    JournalIntegrityError,
    NothingToUndoError,
    ParseError,
    TrialConcludedError,
    ValidationError,
)
from .explore import (
    AnyDecision,
    DecisionIs,
    Gap,
    PathPattern,
    RecommendationIs,
    StateMatches,
    StateTemplate,
    captured_decisions,
    contains_path,
    count_paths,
    decisions_at,
    decisions_preceding,
    enumerate_paths,
    iter_paths,
    match_paths,
    reachable_recommendations,
    reachable_states,
)
from .model import (
    DEFAULT_CONFIG,
    ROLLING_CONFIG,
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
    make_state,
    state_tallies,
    validate_state,
    validate_tally,
)
from .rules import (
    ExcessToxicity,
    OvercautiousDeescalation,
    RegretRuleSet,
    UnjustifiedEscalation,
)
from .session import (
    JournalEntry,
    TrialSession,
    TrialStatus,
    append_journal_entry,
    create_trial,
    read_journal,
    record_cohort,
    replay_journal,
    trial_status,
    undo_last,
)
from .textform import (
    format_path,
    format_state,
    format_tally,
    parse_path,
    parse_state,
    parse_tally,
    sorted_paths,
)
from .verify import (
    Counterexample,
    PropertyReport,
    check_determinism,
    check_dlt_cap,
    check_liveness,
    check_mtd_support,
    check_safety,
    dlt_cap_violation,
    liveness_violation,
    mtd_support_violation,
    safety_violation,
)

__version__ = "0.1.0"
