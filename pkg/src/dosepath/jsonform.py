"""Machine-readable JSON shapes shared by the CLI and the HTTP API.

Field names here are part of the public contract; the dashboard and any
other client render these payloads verbatim.
"""

from __future__ import annotations

from typing import List, Optional

from .model import EscalationState, Tally, TrialPath
from .session import TrialSession, TrialStatus
from .textform import format_path, format_state
from .verify import PropertyReport


def tally_json(tally: Tally) -> dict:
    return {"t": tally.t, "n": tally.n}


def state_json(state: EscalationState) -> dict:
    return {
        "lower": [tally_json(q) for q in state.lower],
        "higher": [tally_json(q) for q in state.higher],
    }


def state_payload(state: EscalationState) -> dict:
    """State plus derived fields interfaces commonly need."""
    tallies = tuple(reversed(state.lower)) + state.higher
    return {
        "state": state_json(state),
        "state_text": format_state(state),
        "current_dose": len(state.lower),
        "tallies": [tally_json(q) for q in tallies],
    }


def status_json(status: TrialStatus) -> dict:
    payload = {
        "id": status.id,
        "status": status.status,
        "recommendation": status.recommendation,
        "next_decision": status.next_decision.value,
        "doses": status.doses,
        "cohort_sizes": list(status.cohort_sizes),
        "reachable_recommendations": list(status.reachable_recommendations),
        "journal": [e.to_json() for e in status.journal],
        "records_live": status.records_live,
    }
    payload.update(state_payload(status.state))
    return payload


def created_json(session: TrialSession) -> dict:
    payload = {
        "id": session.id,
        "status": session.status,
        "recommendation": session.recommendation,
        "next_decision": session.mandated_decision.value,
        "cohort_sizes": list(session.config.cohort_sizes),
    }
    payload.update(state_payload(session.state))
    return payload


def paths_json(
    doses: int,
    cohort_sizes: List[int],
    lines: Optional[List[str]],
    count: int,
) -> dict:
    payload = {"doses": doses, "cohort_sizes": cohort_sizes, "count": count}
    if lines is not None:
        payload["paths"] = lines
    return payload


def report_json(report: PropertyReport) -> dict:
    return {
        "property": report.property_name,
        "doses": list(report.doses_checked),
        "holds": report.holds,
        "paths_examined": report.paths_examined,
        "elapsed_seconds": report.elapsed_seconds,
        "counterexamples": [
            {
                "doses": ce.doses,
                "path": format_path(ce.path),
                "witness": ce.witness,
            }
            for ce in report.counterexamples
        ],
    }


def report_text(report: PropertyReport) -> str:
    """Human-readable property report for terminals."""
    doses = ",".join(str(d) for d in report.doses_checked)
    lines = [
        f"property {report.property_name} over doses {{{doses}}}: "
        f"{'holds' if report.holds else 'VIOLATED'} "
        f"({report.paths_examined} paths examined, "
        f"{report.elapsed_seconds:.3f}s)"
    ]
    for ce in report.counterexamples:
        lines.append(f"  counterexample at doses={ce.doses}: {ce.witness}")
        lines.append(f"    {format_path(ce.path)}")
    return "\n".join(lines)
