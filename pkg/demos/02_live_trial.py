"""Run one trial live, the way an investigator would.

The session never asks which decision to take: the protocol mandates
it. Investigators only report how each cohort turned out. Undo is an
audited correction, not a deletion.
"""

from dosepath import (
    DEFAULT_CONFIG,
    create_trial,
    format_state,
    record_cohort,
    trial_status,
    undo_last,
)

session = create_trial(DEFAULT_CONFIG, doses=3)
print(f"trial {session.id}: state {format_state(session.state)}")
print(f"protocol mandates: {session.mandated_decision.value}\n")

# first cohort of 3 at dose 1: one DLT
session = record_cohort(session, size=3, dlts=1)
print(f"after 1 DLT in 3: {format_state(session.state)}")
print(f"mandated next: {session.mandated_decision.value} (expand the same dose)\n")

# oops, the DLT was a data-entry mistake: correct it
session = undo_last(session)
session = record_cohort(session, size=3, dlts=0)
print(f"corrected to 0 DLTs in 3: {format_state(session.state)}")
print(f"mandated next: {session.mandated_decision.value} (move up)\n")

# escalate, then two toxic cohorts end the trial
session = record_cohort(session, size=3, dlts=2)
print(f"2 DLTs at dose 2: {format_state(session.state)}")
print(f"mandated next: {session.mandated_decision.value} (retreat)\n")

session = record_cohort(session, size=3, dlts=0)
status = trial_status(session)
print(f"final state: {format_state(status.state)}")
print(f"status: {status.status}, recommended dose: {status.recommendation}")
print(f"journal is append-only: {len(status.journal)} entries, "
      f"{status.records_live} live records")
