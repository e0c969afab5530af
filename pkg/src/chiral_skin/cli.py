"""Command line entry point: ``chiral-skin run|validate|plot``."""

import argparse
import logging
import os
import sys
from pathlib import Path

from .config import FORMATS, load_config
from .errors import ChiralSkinError, ConfigError
from .experiments import run_experiment
from .output import write_table

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICS, EXIT_CHECKS = 0, 1, 2, 3
OUT_DIR_ENV = "CHIRAL_SKIN_OUT_DIR"

log = logging.getLogger("chiral_skin")


def resolve_out_dir(cfg, cli_dir=None):
    """--out-dir, then output.dir, then $CHIRAL_SKIN_OUT_DIR/<experiment>, then ./out/<experiment>."""
    if cli_dir:
        return Path(cli_dir)
    if cfg.output.dir:
        return Path(cfg.output.dir)
    root = os.environ.get(OUT_DIR_ENV)
    return Path(root or "out") / cfg.experiment


def cmd_validate(args):
    cfg = load_config(args.config)
    print(f"{args.config}: experiment {cfg.experiment} ok")
    for w in cfg.warnings:
        print(f"warning: {w}")
    return EXIT_OK


def cmd_run(args):
    cfg = load_config(args.config)
    fmt = args.format or cfg.output.format
    for w in cfg.warnings:
        log.warning(w)
    out_dir = resolve_out_dir(cfg, args.out_dir)
    result = run_experiment(cfg, threads=args.threads, seed=args.seed)
    provenance = cfg.resolved()
    provenance["seed"] = args.seed
    paths = [write_table(out_dir, t, provenance, fmt) for t in result.tables]
    paths.append(write_table(out_dir, result.checks_table(), provenance, fmt))
    print(f"wrote {len(paths)} tables to {out_dir}")
    for c in result.checks:
        print(f"{'PASS' if c.passed else 'FAIL'} {c.name}: value={c.value:.6g} tolerance={c.tolerance:.6g} {c.detail}".rstrip())
    if args.plot:
        from .plotting import plot_directory
        for p in plot_directory(out_dir):
            print(f"plot {p}")
    return EXIT_OK if result.passed else EXIT_CHECKS


def cmd_plot(args):
    from .plotting import plot_directory
    for p in plot_directory(args.directory):
        print(f"plot {p}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="chiral-skin", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment config and write its tables")
    run.add_argument("config")
    run.add_argument("--out-dir", help="output directory (overrides output.dir)")
    run.add_argument("--format", choices=FORMATS, help="table format (overrides output.format)")
    run.add_argument("--threads", type=int, default=1, help="worker threads for per-state diagnostics")
    run.add_argument("--seed", type=int, default=0, help="seed for eigensolver self-test matrices")
    run.add_argument("--plot", action="store_true", help="also render PNG figures from the tables")
    run.set_defaults(func=cmd_run)

    val = sub.add_parser("validate", help="check a config without running it")
    val.add_argument("config")
    val.set_defaults(func=cmd_validate)

    plot = sub.add_parser("plot", help="render PNG figures from an output directory")
    plot.add_argument("directory")
    plot.set_defaults(func=cmd_plot)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s: %(message)s")
    if getattr(args, "threads", 1) < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ChiralSkinError as exc:
        print(f"numerics error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICS


if __name__ == "__main__":
    sys.exit(main())
