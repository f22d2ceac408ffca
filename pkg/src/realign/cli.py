"""Command-line driver: ``realign <subcommand> [flags]``.

Exit status is 0 on success, 2 when an experiment's built-in checks fail
and 1 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import __version__
from .harness import ExperimentConfig, run

SUBCOMMANDS = {
    "spectrum": "spectrum",
    "moments": "moments",
    "oracle": "oracle_check",
    "threshold": "threshold_balanced",
    "unbalanced": "threshold_unbalanced",
    "compare": "criteria_compare",
}

HELP = {
    "spectrum": "histogram and moments of the singular values of Q vs the quarter-circle law",
    "moments": "normalised moments of QQ*: Monte Carlo, exact sum, Catalan limit",
    "oracle": "exact permutation-sum moments vs Monte Carlo z-scores",
    "threshold": "balanced detection-fraction sweep over s",
    "unbalanced": "unbalanced detection-fraction sweep and singular values of R/d2",
    "compare": "PPT vs realignment verdicts on induced states",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _grid(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad s-grid {text!r}; expected comma-separated integers")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="realign", description="Realignment criterion experiments on random states.")
    parser.add_argument("--version", action="version", version=f"realign {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name, help=HELP[name], description=HELP[name])
        p.add_argument("--d", type=int, help="local dimension of both factors")
        p.add_argument("--d1", type=int)
        p.add_argument("--d2", type=int)
        p.add_argument("--s", type=int, help="environment dimension")
        p.add_argument("--s-grid", type=_grid, help="comma-separated increasing s values")
        p.add_argument("--trials", type=int, default=10)
        p.add_argument("--p-max", type=int, default=2)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="output file")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def _summary(result) -> dict:
    name = result.config.experiment
    if name == "spectrum":
        return {"ks_distance": result.ks, "mean_singular_value": result.mean_singular_value,
                "moments": result.moments}
    if name in ("oracle_check",):
        return {"rows": [{k: (str(v) if k == "exact" else v) for k, v in r.items()} for r in result.rows],
                "cancellation": result.cancellation}
    if name == "moments":
        return {"rows": [{k: (str(v) if k == "exact_normalised" else v) for k, v in r.items()}
                         for r in result.rows]}
    if name.startswith("threshold"):
        return {"points": [p.as_row() for p in result.points], "crossing_s": result.crossing(),
                "crossing_ratio": result.crossing_ratio()}
    return result.summary


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = ExperimentConfig(
            experiment=SUBCOMMANDS[args.command],
            d=args.d,
            d1=args.d1,
            d2=args.d2,
            s=args.s,
            s_grid=args.s_grid,
            trials=args.trials,
            p_max=args.p_max,
            seed=args.seed,
            output_path=args.out,
            format=args.format,
        )
        result = run(cfg)
    except ValueError as exc:
        print(f"realign: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"realign: I/O error: {exc}", file=sys.stderr)
        return 1
    print(json.dumps({"experiment": cfg.experiment, "checks": result.checks, **_summary(result)},
                     indent=2, default=str))
    return 0 if result.ok else 2


if __name__ == "__main__":
    sys.exit(main())
