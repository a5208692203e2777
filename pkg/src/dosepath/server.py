"""HTTP decision-support service.

Request bodies are parsed by hand so the error contract stays exact:
400 malformed request, 404 unknown trial, 409 mutation of a concluded
trial (or nothing to undo), 422 disallowed cohort size or DLT count.
Per-trial mutations are serialized; protocol-level endpoints are
stateless. Enumeration over HTTP is bounded; use the CLI for large
ladders.
"""

from __future__ import annotations

import threading
from dataclasses import replace
from pathlib import Path
from typing import Dict, Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .engine import (
    apply_decision,
    enroll_transitions,
    enrolled_dose_tally,
    next_decision,
    stop_recommendation,
)
from .errors import (
    InfeasibleDecisionError,
    NothingToUndoError,
    TrialConcludedError,
    ValidationError,
)
from .explore import enumerate_paths, reachable_recommendations
from .jsonform import (
    created_json,
    paths_json,
    report_json,
    state_payload,
    status_json,
)
from .model import DEFAULT_CONFIG, Decision, ProtocolConfig, all_zero_state
from .session import (
    TrialSession,
    append_journal_entry,
    create_trial,
    read_journal,
    record_cohort,
    replay_journal,
    trial_status,
    undo_last,
)
from .textform import format_path
from .verify import (
    check_determinism,
    check_dlt_cap,
    check_liveness,
    check_mtd_support,
    check_safety,
)

PROPERTY_CHECKS = {
    "safety": check_safety,
    "liveness": check_liveness,
    "dlt-cap": check_dlt_cap,
    "mtd-support": check_mtd_support,
    "determinism": check_determinism,
}


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": message})


class TrialStore:
    """In-memory sessions with optional NDJSON journal persistence."""

    def __init__(self, data_dir: Optional[str] = None):
        self.data_dir = Path(data_dir) if data_dir else None
        self.sessions: Dict[str, TrialSession] = {}
        self.locks: Dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()
        if self.data_dir is not None:
            self.data_dir.mkdir(parents=True, exist_ok=True)
            self._load_existing()

    def _load_existing(self) -> None:
        for journal_file in sorted(self.data_dir.glob("*.ndjson")):
            entries = read_journal(journal_file)
            session = replace(replay_journal(entries), id=journal_file.stem)
            self.sessions[session.id] = session
            self.locks[session.id] = threading.Lock()

    def _journal_file(self, trial_id: str) -> Optional[Path]:
        if self.data_dir is None:
            return None
        return self.data_dir / f"{trial_id}.ndjson"

    def lock_for(self, trial_id: str) -> threading.Lock:
        with self._registry_lock:
            return self.locks.setdefault(trial_id, threading.Lock())

    def add(self, session: TrialSession) -> None:
        self.sessions[session.id] = session
        path = self._journal_file(session.id)
        if path is not None:
            for entry in session.journal:
                append_journal_entry(path, entry)

    def update(self, old: TrialSession, new: TrialSession) -> None:
        self.sessions[new.id] = new
        path = self._journal_file(new.id)
        if path is not None:
            for entry in new.journal[len(old.journal) :]:
                append_journal_entry(path, entry)

    def get(self, trial_id: str) -> Optional[TrialSession]:
        return self.sessions.get(trial_id)


def create_app(
    data_dir: Optional[str] = None,
    default_config: Optional[ProtocolConfig] = None,
    max_http_doses: int = 4,
    ui_dir: Optional[str] = None,
) -> FastAPI:
    base_config = default_config or DEFAULT_CONFIG
    store = TrialStore(data_dir)
    app = FastAPI(title="dosepath", version="0.1.0")

    async def _body(request: Request) -> dict:
        try:
            payload = await request.json()
        except Exception:
            raise ValueError("request body must be a JSON object")
        if not isinstance(payload, dict):
            raise ValueError("request body must be a JSON object")
        return payload

    @app.post("/trials")
    async def post_trials(request: Request):
        try:
            payload = await _body(request)
            doses = payload.get("doses")
            if not isinstance(doses, int) or isinstance(doses, bool):
                raise ValueError("field 'doses' must be an integer")
            config = base_config
            if "cohort_sizes" in payload:
                sizes = payload["cohort_sizes"]
                if not isinstance(sizes, list) or not all(
                    isinstance(c, int) and not isinstance(c, bool) for c in sizes
                ):
                    raise ValueError("field 'cohort_sizes' must be a list of integers")
                config = ProtocolConfig(
                    cohort_sizes=tuple(sizes),
                    max_denominator=base_config.max_denominator,
                    max_doses=base_config.max_doses,
                    regret_rules=base_config.regret_rules,
                )
            session = create_trial(config, doses)
        except (ValueError, ValidationError) as exc:
            return _error(400, str(exc))
        with store.lock_for(session.id):
            store.add(session)
        return created_json(session)

    @app.get("/trials/{trial_id}")
    def get_trial(trial_id: str):
        session = store.get(trial_id)
        if session is None:
            return _error(404, f"unknown trial {trial_id!r}")
        return status_json(trial_status(session))

    @app.post("/trials/{trial_id}/outcomes")
    async def post_outcome(trial_id: str, request: Request):
        session = store.get(trial_id)
        if session is None:
            return _error(404, f"unknown trial {trial_id!r}")
        try:
            payload = await _body(request)
            size = payload.get("size")
            dlts = payload.get("dlts")
            for name, value in (("size", size), ("dlts", dlts)):
                if not isinstance(value, int) or isinstance(value, bool):
                    raise ValueError(f"field {name!r} must be an integer")
        except ValueError as exc:
            return _error(400, str(exc))
        with store.lock_for(trial_id):
            session = store.get(trial_id)
            try:
                updated = record_cohort(session, size, dlts)
            except TrialConcludedError as exc:
                return _error(409, str(exc))
            except (ValidationError, InfeasibleDecisionError) as exc:
                return _error(422, str(exc))
            store.update(session, updated)
        return status_json(trial_status(updated))

    @app.post("/trials/{trial_id}/undo")
    def post_undo(trial_id: str):
        session = store.get(trial_id)
        if session is None:
            return _error(404, f"unknown trial {trial_id!r}")
        with store.lock_for(trial_id):
            session = store.get(trial_id)
            try:
                updated = undo_last(session)
            except NothingToUndoError as exc:
                return _error(409, str(exc))
            store.update(session, updated)
        return status_json(trial_status(updated))

    @app.get("/trials/{trial_id}/whatif")
    def get_whatif(trial_id: str):
        session = store.get(trial_id)
        if session is None:
            return _error(404, f"unknown trial {trial_id!r}")
        if session.concluded:
            return _error(409, "trial concluded; no further outcomes are possible")
        decision = session.mandated_decision
        target = enrolled_dose_tally(session.state, decision)
        options = []
        for outcome in enroll_transitions(target, session.config):
            new_state = apply_decision(
                session.state,
                decision,
                outcome.n - target.n,
                outcome.t - target.t,
                session.config,
            )
            following = next_decision(new_state, session.config)
            concluded = following is Decision.STOP
            row = {
                "size": outcome.n - target.n,
                "dlts": outcome.t - target.t,
                "next_decision": following.value,
                "status": "concluded" if concluded else "active",
                "recommendation": stop_recommendation(new_state) if concluded else None,
                "reachable_recommendations": sorted(
                    reachable_recommendations(new_state, config=session.config)
                ),
            }
            row.update(state_payload(new_state))
            options.append(row)
        return {"id": trial_id, "decision": decision.value, "options": options}

    @app.get("/protocol/paths")
    def get_paths(doses: str = "", cohorts: str = ""):
        try:
            doses_num = int(doses)
        except ValueError:
            return _error(400, "query parameter 'doses' must be an integer")
        try:
            config = _config_with_cohorts(base_config, cohorts)
        except (ValueError, ValidationError) as exc:
            return _error(400, str(exc))
        if not 1 <= doses_num <= config.max_doses:
            return _error(400, f"doses must be in 1..{config.max_doses}")
        if doses_num > max_http_doses:
            return _error(
                422,
                f"enumeration over HTTP is limited to {max_http_doses} doses; "
                f"use the CLI for larger ladders",
            )
        paths = enumerate_paths(all_zero_state(doses_num, config), config)
        lines = [format_path(p) for p in paths]
        return paths_json(doses_num, list(config.cohort_sizes), lines, len(lines))

    @app.get("/protocol/verify")
    def get_verify(property: str = "", doses: str = "", cohorts: str = ""):
        if property not in PROPERTY_CHECKS:
            return _error(
                400, f"unknown property {property!r}; one of {sorted(PROPERTY_CHECKS)}"
            )
        try:
            lo, hi = _parse_range(doses)
            config = _config_with_cohorts(base_config, cohorts)
        except (ValueError, ValidationError) as exc:
            return _error(400, str(exc))
        if hi > max_http_doses:
            return _error(
                422,
                f"verification over HTTP is limited to {max_http_doses} doses; "
                f"use the CLI for larger ladders",
            )
        report = PROPERTY_CHECKS[property](range(lo, hi + 1), config)
        return report_json(report)

    if ui_dir and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def _parse_range(text: str):
    if ".." in text:
        lo_text, hi_text = text.split("..", 1)
        lo, hi = int(lo_text), int(hi_text)
    else:
        lo = hi = int(text)
    if lo < 1 or hi < lo:
        raise ValueError(f"doses range {text!r} is empty or starts below 1")
    return lo, hi


def _config_with_cohorts(base: ProtocolConfig, cohorts: str) -> ProtocolConfig:
    if not cohorts:
        return base
    sizes = tuple(int(c) for c in cohorts.split(","))
    return ProtocolConfig(
        cohort_sizes=sizes,
        max_denominator=base.max_denominator,
        max_doses=base.max_doses,
        regret_rules=base.regret_rules,
    )
