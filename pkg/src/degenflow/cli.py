"""Command line entry point: ``degenflow --scenario NAME [options] --out report.json``."""

from __future__ import annotations

import argparse
import logging
import sys

from .experiments import run
from .report import SCENARIOS, ConfigError, ExperimentConfig, emit

log = logging.getLogger("degenflow")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="degenflow", description="Run a degenerate-diffusion experiment.")
    p.add_argument("--scenario", required=True, choices=SCENARIOS)
    p.add_argument("--m", type=int, help="grid parameter (2m nodes on [-1, 1))")
    p.add_argument("--sigma", type=float, help="degeneracy exponent")
    p.add_argument("--eps", type=float, help="fractional order of the edge detector")
    p.add_argument("--t-final", type=float, help="evolution time")
    p.add_argument("--h-step", type=float, help="implicit Euler step")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--two-d", action="store_true", help="kernel-exponent: also fit the 2D circle kernel")
    p.add_argument("--out", required=True, help="path of the JSON report; CSV tables go next to it")
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s", stream=sys.stderr)
    parser = build_parser()
    args = parser.parse_args(argv)
    config = ExperimentConfig(args.scenario, args.m, args.sigma, args.eps, args.t_final, args.h_step,
                              args.seed, args.out, args.two_d)
    try:
        config.validate()
    except ConfigError as exc:
        parser.error(str(exc))
    report = run(config)
    emit(report, args.out)
    for name, ok in report.passed.items():
        log.info("%-28s %s", name, "PASS" if ok else "FAIL")
    log.info("wall time %.2fs -> %s", report.wall_time, args.out)
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
