"""Command line interface: ``exo-flr test | simulate | sweep``.

``exo-flr test`` exits with 0 when exogeneity is not rejected, 3 when it is
rejected and 1 on any error.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import __version__
from .bootstrap import bootstrap_test
from .dgp import DgpConfig, sample_dataset
from .errors import ExoFlrError
from .exotest import asymptotic_test
from .harness import load_config, run_sweep
from .io import format_outcome, read_dataset, write_dataset, write_result

EXIT_ACCEPT = 0
EXIT_ERROR = 1
EXIT_REJECT = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="exo-flr", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    t = sub.add_parser("test", help="test exogeneity on a dataset CSV")
    t.add_argument("--data", required=True)
    t.add_argument("--alpha", type=float, required=True)
    t.add_argument("--nu", type=float, default=0.0, help="Sobolev exponent of the cut-off")
    t.add_argument("--gamma", type=float, required=True)
    t.add_argument("--K", type=int, default=None, help="truncation order (default floor(p/2))")
    kind = t.add_mutually_exclusive_group(required=True)
    kind.add_argument("--asymptotic", action="store_true")
    kind.add_argument("--bootstrap", metavar="SCHEME", choices=["efron", "mammen", "rademacher", "normal"])
    t.add_argument("--B", type=int, default=500)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--out", help="also write the outcome as key,value CSV")
    t.add_argument("--replicates", action="store_true", help="print bootstrap replicates too")

    s = sub.add_parser("simulate", help="draw a dataset from the simulation design")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--p", type=int, default=100)
    s.add_argument("--rho", type=float, required=True)
    s.add_argument("--nu-instr", type=float, required=True)
    s.add_argument("--beta", type=int, choices=[1, 2, 3], default=1)
    s.add_argument("--sigma", type=float, default=7 / 5)
    s.add_argument("--h", type=float, default=0.1, help="bandwidth of the smoothed indicator")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True)

    w = sub.add_parser("sweep", help="run a Monte Carlo sweep from a config file")
    w.add_argument("--config", required=True)
    w.add_argument("--out", required=True)
    w.add_argument("--workers", type=int, default=1)
    w.add_argument("--full-scale", action="store_true", help="use 1000 repetitions and B=500")
    w.add_argument("--no-timing", action="store_true", help="write wall_ms as 0 for byte-stable output")
    return parser


def _cmd_test(args) -> int:
    data = read_dataset(args.data)
    if args.asymptotic:
        outcome = asymptotic_test(data, args.alpha, args.nu, args.gamma, K=args.K)
    else:
        outcome = bootstrap_test(
            data, args.alpha, args.nu, scheme=args.bootstrap, B=args.B,
            gamma=args.gamma, seed=args.seed, K=args.K,
        )
    print(format_outcome(outcome, include_replicates=args.replicates))
    if args.out:
        write_result(outcome, args.out)
    return EXIT_REJECT if outcome.reject else EXIT_ACCEPT


def _cmd_simulate(args) -> int:
    cfg = DgpConfig(
        n=args.n, p=args.p, rho=args.rho, nu_instr=args.nu_instr, sigma=args.sigma,
        beta_id=args.beta, h=args.h, seed=args.seed,
    )
    write_dataset(sample_dataset(cfg), args.out)
    return EXIT_ACCEPT


def _cmd_sweep(args) -> int:
    cells = load_config(args.config, full_scale=args.full_scale)
    run_sweep(cells, args.out, workers=args.workers, timing=not args.no_timing)
    return EXIT_ACCEPT


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_ACCEPT
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    handler = {"test": _cmd_test, "simulate": _cmd_simulate, "sweep": _cmd_sweep}[args.command]
    try:
        return handler(args)
    except (ExoFlrError, ValueError, OSError) as exc:
        print(f"exo-flr: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
