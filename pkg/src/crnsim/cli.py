"""Command-line entry point: `crnsim run` and `crnsim sweep`."""

import argparse
import sys
from dataclasses import replace

from .config import ConfigError, load_config
from .runner import run_many, steady_points, sweep, write_csv


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crnsim",
        description="Slotted-time Monte Carlo simulator of opportunistic spectrum access",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="simulate one scenario and write a CSV")
    run_p.add_argument("--config", required=True, help="scenario config file")
    run_p.add_argument("--policy", help="override the configured policy")
    run_p.add_argument("--seeds", type=int, help="override num_seeds")
    run_p.add_argument("--master-seed", type=int, help="override master_seed")
    run_p.add_argument("--out", required=True, help="output CSV path")
    run_p.add_argument("--workers", type=int, default=1,
                       help="processes for parallel runs (default 1)")
    mode = run_p.add_mutually_exclusive_group()
    mode.add_argument("--timeseries", dest="mode", action="store_const",
                      const="timeseries", help="per-slot rows (default)")
    mode.add_argument("--steady", dest="mode", action="store_const",
                      const="steady", help="steady-state summary rows")
    run_p.set_defaults(mode="timeseries")

    sweep_p = sub.add_parser("sweep", help="sweep a parameter over all policies")
    sweep_p.add_argument("--config", required=True, help="scenario config file")
    sweep_p.add_argument("--param", required=True, choices=("mean_snr_db", "rho"))
    sweep_p.add_argument("--values", required=True,
                         help="comma-separated parameter values")
    sweep_p.add_argument("--seeds", type=int, help="override num_seeds")
    sweep_p.add_argument("--master-seed", type=int, help="override master_seed")
    sweep_p.add_argument("--out", required=True, help="output CSV path")
    sweep_p.add_argument("--workers", type=int, default=1,
                         help="processes for parallel runs (default 1)")
    return parser


def _load_with_overrides(args):
    cfg = load_config(args.config)
    if getattr(args, "policy", None):
        cfg = replace(cfg, policy=args.policy)
    if args.seeds is not None:
        cfg = replace(cfg, num_seeds=args.seeds)
    if args.master_seed is not None:
        cfg = replace(cfg, master_seed=args.master_seed)
    cfg.validate()
    return cfg


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _load_with_overrides(args)
        if args.command == "run":
            runs = run_many(cfg, workers=args.workers)
            if args.mode == "steady":
                write_csv(steady_points({cfg.policy: runs}), args.out)
            else:
                write_csv(runs, args.out)
        else:
            values = [float(v) for v in args.values.split(",") if v.strip()]
            points = sweep(cfg, args.param, values, workers=args.workers)
            if not points:
                print("empty value list: nothing to write", file=sys.stderr)
                return 0
            write_csv(points, args.out)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
