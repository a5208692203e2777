"""Exception hierarchy shared across the package."""


class DosePathError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(DosePathError):
    """A domain value violates one of its invariants.

    The message names the violated bound, e.g. "n must be <= 6".
    """


class ParseError(DosePathError):
    """Canonical text could not be parsed. Carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class InfeasibleDecisionError(DosePathError):
    """A decision was applied in a state where it is structurally impossible
    or would enroll past the per-dose patient cap."""


class TrialConcludedError(DosePathError):
    """A mutation was attempted on a trial that has already concluded."""


class NothingToUndoError(DosePathError):
    """Undo was requested but no recorded cohort remains to undo."""


class JournalIntegrityError(DosePathError):
    """A journal entry disagrees with the state recomputed during replay."""
