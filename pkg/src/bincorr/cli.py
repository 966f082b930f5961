#!/usr/bin/env python3
"""
bincorr command line.

Usage:
    bincorr analyze singlet.json
    bincorr detect chen.json --exact
    bincorr detect werner.json --shots 100000 --seed 7 --assume-pure
    bincorr sweep-werner --from 0 --to 1 --steps 11 --pair "0,0,1|0,0,1"
    bincorr gen --kind werner --xi 0.2 --out werner.json
    bincorr verify --trials 1000 --report results/verify.json

Exit codes for detect: 0 Separable, 1 Entangled, 2 Indeterminate.
Any error (bad input, usage) exits 3.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections.abc import Callable
from typing import NoReturn

import numpy as np

from bincorr.config import SETTINGS
from bincorr.correlation import ObservablePair
from bincorr.detect import Label, binary_protocol, werner_sweep
from bincorr.errors import ParseError
from bincorr.report import build_report, format_report, format_werner_table
from bincorr.shotsim import ShotConfig, statistical_binary_protocol
from bincorr.states import (
    BellState,
    State,
    bell_state,
    chen_state,
    dump_state_file,
    haar_random_pure,
    load_state_file,
    random_product_pure,
    random_pure_mixture,
    random_separable_mixed,
    werner,
)
from bincorr.verify import format_summary, run_all, save_report

logger = logging.getLogger("bincorr")

EXIT_ERROR = 3

EXIT_CODES = {
    Label.SEPARABLE: 0,
    Label.ENTANGLED: 1,
    Label.INDETERMINATE: 2,
}


class _Parser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with the error code."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_ERROR)


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def parse_vector(text: str) -> np.ndarray:
    """'x1,x2,x3' -> array of three floats."""
    try:
        values = [float(p) for p in text.split(",")]
    except ValueError as e:
        raise ParseError(f"not a comma-separated vector: {text!r}") from e
    if len(values) != 3:
        raise ParseError(f"expected 3 components, got {len(values)}: {text!r}")
    return np.array(values)


def parse_vectors(text: str) -> list[np.ndarray]:
    """'v;v;v' -> three vectors."""
    return [parse_vector(part) for part in text.split(";")]


def parse_pair(text: str) -> ObservablePair:
    """'x1,x2,x3|y1,y2,y3' -> ObservablePair."""
    parts = text.split("|")
    if len(parts) != 2:
        raise ParseError(f"pair must look like 'x1,x2,x3|y1,y2,y3', got {text!r}")
    return ObservablePair(parse_vector(parts[0]), parse_vector(parts[1]))


def _emit_json(doc: dict) -> None:
    print(json.dumps(doc, indent=2))


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_analyze(args: argparse.Namespace) -> int:
    label, state = load_state_file(args.file)
    report = build_report(label, state)
    if args.json:
        _emit_json(report.to_dict())
    else:
        print(format_report(report))
    return 0


def cmd_detect(args: argparse.Namespace) -> int:
    label, state = load_state_file(args.file)
    y = parse_vector(args.y) if args.y else None
    xs = parse_vectors(args.xs) if args.xs else None

    if args.shots is None:
        protocol = binary_protocol(state, y, xs, assume_pure=args.assume_pure)
    else:
        cfg = ShotConfig(
            shots=args.shots,
            seed=SETTINGS.shots.seed if args.seed is None else args.seed,
            z_threshold=SETTINGS.shots.z_threshold if args.z is None else args.z,
            mode=args.mode or SETTINGS.shots.mode,
        )
        protocol = statistical_binary_protocol(state, y, xs, cfg, assume_pure=args.assume_pure)

    report = build_report(label, state, protocol)
    if args.json:
        _emit_json(report.to_dict())
    else:
        print(format_report(report))
    return EXIT_CODES[protocol[0].label]


def _xi_grid(start: float, stop: float, steps: int) -> list[float]:
    if steps < 1:
        raise ParseError(f"--steps must be >= 1, got {steps}")
    if steps == 1:
        return [start]
    return np.linspace(start, stop, steps).tolist()


def cmd_sweep_werner(args: argparse.Namespace) -> int:
    pair = parse_pair(args.pair)
    rows = werner_sweep(_xi_grid(args.start, args.stop, args.steps), pair)
    if args.json:
        _emit_json({"pair": pair.to_dict(), "rows": [r.to_dict() for r in rows]})
    else:
        print(f"pair: x = {pair.x.tolist()}  y = {pair.y.tolist()}")
        print(format_werner_table(rows))
    return 0


_BELL_KINDS = {
    "bell-psim": BellState.PSI_MINUS,
    "bell-psip": BellState.PSI_PLUS,
    "bell-phim": BellState.PHI_MINUS,
    "bell-phip": BellState.PHI_PLUS,
}


def _generate(args: argparse.Namespace) -> State:
    kind = args.kind
    if kind in _BELL_KINDS:
        return bell_state(_BELL_KINDS[kind])
    generators: dict[str, Callable[[], State]] = {
        "chen": chen_state,
        "werner": lambda: werner(args.xi),
        "haar": lambda: haar_random_pure(args.seed),
        "product": lambda: random_product_pure(args.seed),
        "sep-mixed": lambda: random_separable_mixed(args.seed, args.components),
        "pure-mixture": lambda: random_pure_mixture(args.seed, args.components),
    }
    return generators[kind]()


def cmd_gen(args: argparse.Namespace) -> int:
    state = _generate(args)
    label = args.kind if args.kind != "werner" else f"werner-{args.xi:g}"
    path = dump_state_file(state, args.out, label)
    print(f"wrote {label} to {path}")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    results = run_all(args.trials, args.seed)
    print(format_summary(results, args.trials, args.seed))
    if args.report:
        path = save_report(results, args.report, args.trials, args.seed)
        print(f"Report saved: {path}")
    return 0 if all(r.passed for r in results) else 1


# ---------------------------------------------------------------------------
# Main
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="bincorr",
        description="Binary correlation measurements and separability of two-qubit states",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging on stderr.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="Bloch form, correlation matrix and oracle verdicts.")
    p.add_argument("file", help="State file (JSON).")
    p.add_argument("--json", action="store_true", help="Output the report as JSON.")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("detect", help="Run the three-probe separability protocol.")
    p.add_argument("file", help="State file (JSON).")
    how = p.add_mutually_exclusive_group()
    how.add_argument("--exact", action="store_true", help="Exact correlation oracle (default).")
    how.add_argument("--shots", type=int, help="Simulate N shots per probe instead.")
    p.add_argument("--seed", type=int, help="Seed for the shot simulator.")
    p.add_argument("--z", type=float, help="Standard errors needed for a non-zero call.")
    p.add_argument("--mode", choices=["joint", "independent"], help="Shot sampling mode.")
    p.add_argument("--y", help="Observable on B as 'y1,y2,y3'.")
    p.add_argument("--xs", help="Three probes on A as 'x;x;x', each 'x1,x2,x3'.")
    p.add_argument("--assume-pure", action="store_true", help="Read the outcome as for a pure state.")
    p.add_argument("--json", action="store_true", help="Output the report as JSON.")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("sweep-werner", help="Covariance and PPT verdict across the Werner family.")
    p.add_argument("--from", dest="start", type=float, default=0.0)
    p.add_argument("--to", dest="stop", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=11)
    p.add_argument("--pair", default="0,0,1|0,0,1", help="Observable pair as 'x|y'.")
    p.add_argument("--json", action="store_true", help="Output rows as JSON.")
    p.set_defaults(func=cmd_sweep_werner)

    p = sub.add_parser("gen", help="Write a fixture or random state file.")
    p.add_argument(
        "--kind",
        required=True,
        choices=[*_BELL_KINDS, "chen", "werner", "haar", "product", "sep-mixed", "pure-mixture"],
    )
    p.add_argument("--xi", type=float, help="Werner mixing parameter (required for werner).")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--components", type=int, default=3, help="Terms in sep-mixed / pure-mixture.")
    p.add_argument("--out", required=True, help="Output path.")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", help="Run the property suites.")
    p.add_argument("--trials", type=int, default=SETTINGS.verify.trials)
    p.add_argument("--seed", type=int, default=SETTINGS.verify.seed)
    p.add_argument("--report", help="Write a JSON summary to this path.")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    logger.debug("command=%s", args.command)

    if args.command == "gen" and args.kind == "werner" and args.xi is None:
        parser.error("gen --kind werner requires --xi")
    if args.command == "detect" and args.shots is None and (
        args.seed is not None or args.z is not None or args.mode is not None
    ):
        parser.error("--seed, --z and --mode require --shots")
    if args.command == "verify" and args.trials < SETTINGS.verify.min_trials:
        parser.error(f"--trials must be >= {SETTINGS.verify.min_trials}")

    try:
        return args.func(args)
    except (ValueError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
