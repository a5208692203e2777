"""Command-line front end.

Subcommands:
    next     mandated decision for a state
    paths    enumerate (or count) all admissible paths from an all-zero start
    recs     reachable final recommendations from a state
    verify   check a protocol property over a range of ladder sizes
    serve    run the HTTP decision-support service

Exit codes: 0 success, 2 usage or validation error, 3 property violated.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional

from .engine import next_decision, stop_recommendation
from .errors import DosePathError
from .explore import count_paths, enumerate_paths, reachable_recommendations
from .jsonform import paths_json, report_json, report_text
from .model import DEFAULT_CONFIG, Decision, ProtocolConfig, all_zero_state
from .textform import format_path, parse_state
from .verify import (
    check_determinism,
    check_dlt_cap,
    check_liveness,
    check_mtd_support,
    check_safety,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VIOLATED = 3

PROPERTY_CHECKS = {
    "safety": check_safety,
    "liveness": check_liveness,
    "dlt-cap": check_dlt_cap,
    "mtd-support": check_mtd_support,
    "determinism": check_determinism,
}


def _parse_cohorts(text: Optional[str]) -> ProtocolConfig:
    if not text:
        return DEFAULT_CONFIG
    try:
        sizes = tuple(int(c) for c in text.split(","))
    except ValueError:
        raise DosePathError(f"--cohorts expects comma-separated integers (got {text!r})")
    return ProtocolConfig(cohort_sizes=sizes)


def _parse_dose_range(text: str) -> range:
    if ".." in text:
        lo_text, hi_text = text.split("..", 1)
        lo, hi = int(lo_text), int(hi_text)
    else:
        lo = hi = int(text)
    if lo < 1 or hi < lo:
        raise DosePathError(f"--doses range {text!r} is empty or starts below 1")
    return range(lo, hi + 1)


def _cmd_next(args: argparse.Namespace) -> int:
    config = _parse_cohorts(args.cohorts)
    state = parse_state(args.state, config)
    decision = next_decision(state, config)
    if args.json:
        payload = {"state": args.state, "next_decision": decision.value}
        if decision is Decision.STOP:
            payload["recommendation"] = stop_recommendation(state)
        print(json.dumps(payload))
    else:
        print(decision.value)
    return EXIT_OK


def _cmd_paths(args: argparse.Namespace) -> int:
    config = _parse_cohorts(args.cohorts)
    if args.count_only:
        count = count_paths(args.doses, config)
        lines = None
    else:
        paths = enumerate_paths(all_zero_state(args.doses, config), config)
        lines = [format_path(p) for p in paths]
        count = len(lines)
    if args.json:
        print(json.dumps(paths_json(args.doses, list(config.cohort_sizes), lines, count)))
    elif lines is None:
        print(count)
    else:
        for line in lines:
            print(line)
    return EXIT_OK


def _cmd_recs(args: argparse.Namespace) -> int:
    config = _parse_cohorts(args.cohorts)
    state = parse_state(args.state, config)
    recs = sorted(reachable_recommendations(state, config=config))
    if args.json:
        print(json.dumps({"state": args.state, "recommendations": recs}))
    else:
        print(",".join(str(r) for r in recs))
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    config = _parse_cohorts(args.cohorts)
    dose_range = _parse_dose_range(args.doses)
    report = PROPERTY_CHECKS[args.property](dose_range, config)
    if args.json:
        print(json.dumps(report_json(report)))
    else:
        print(report_text(report))
    return EXIT_OK if report.holds else EXIT_VIOLATED


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .server import create_app

    config = DEFAULT_CONFIG
    if args.config:
        with open(args.config, "r", encoding="utf-8") as f:
            raw = json.load(f)
        config = ProtocolConfig(
            cohort_sizes=tuple(raw.get("cohort_sizes", DEFAULT_CONFIG.cohort_sizes)),
            max_denominator=raw.get("max_denominator", DEFAULT_CONFIG.max_denominator),
            max_doses=raw.get("max_doses", DEFAULT_CONFIG.max_doses),
        )
    data_dir = args.data or os.environ.get("DOSEPATH_DATA")
    app = create_app(
        data_dir=data_dir,
        default_config=config,
        max_http_doses=args.max_http_doses,
        ui_dir=args.ui,
    )
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dosepath",
        description="3+3 dose-escalation protocol engine and decision support",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_next = sub.add_parser("next", help="mandated decision for a state")
    p_next.add_argument("--state", required=True, help='e.g. "[0/3,0/3]-[0/0]"')
    p_next.add_argument("--cohorts", help="comma-separated cohort sizes, e.g. 3,2,1")
    p_next.add_argument("--json", action="store_true")
    p_next.set_defaults(func=_cmd_next)

    p_paths = sub.add_parser("paths", help="enumerate all admissible paths")
    p_paths.add_argument("--doses", type=int, required=True)
    p_paths.add_argument("--cohorts")
    p_paths.add_argument("--count-only", action="store_true")
    p_paths.add_argument("--json", action="store_true")
    p_paths.set_defaults(func=_cmd_paths)

    p_recs = sub.add_parser("recs", help="reachable final recommendations")
    p_recs.add_argument("--state", required=True)
    p_recs.add_argument("--cohorts")
    p_recs.add_argument("--json", action="store_true")
    p_recs.set_defaults(func=_cmd_recs)

    p_verify = sub.add_parser("verify", help="check a protocol property")
    p_verify.add_argument(
        "--property", required=True, choices=sorted(PROPERTY_CHECKS)
    )
    p_verify.add_argument("--doses", required=True, help="range like 1..4, or a single D")
    p_verify.add_argument("--cohorts")
    p_verify.add_argument("--json", action="store_true")
    p_verify.set_defaults(func=_cmd_verify)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--data", help="journal directory (or env DOSEPATH_DATA)")
    p_serve.add_argument("--config", help="JSON file with protocol parameters")
    p_serve.add_argument("--ui", help="static dashboard directory to serve at /")
    p_serve.add_argument("--max-http-doses", type=int, default=4)
    p_serve.set_defaults(func=_cmd_serve)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DosePathError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
