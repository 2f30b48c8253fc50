"""Command-line entry point: ``jamshield {run,table,verify}``."""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace

from jamshield.config import parse_config
from jamshield.errors import ConfigurationError
from jamshield.experiment import run_experiment
from jamshield.metrics_io import write_metrics_csv, write_summary_csv
from jamshield.report import reproduce_table

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
SEED_ENV = "JAMSHIELD_SEED"


def _resolve_seed(preset, cli_seed):
    if cli_seed is not None:
        return cli_seed
    env = os.environ.get(SEED_ENV)
    if env is not None and env.strip():
        try:
            return int(env)
        except ValueError:
            raise ConfigurationError(f"{SEED_ENV}={env!r} is not an integer", key="seed") from None
    return preset.seed


def cmd_run(args) -> int:
    preset = parse_config(args.config)
    seed = _resolve_seed(preset, args.seed)
    if seed < 0:
        raise ConfigurationError("seed must be >= 0", key="seed")
    preset = replace(preset, seed=seed)

    def progress(episode, row):
        if args.verbose and (episode + 1) % max(1, preset.episodes // 20) == 0:
            print(f"  episode {episode + 1}/{preset.episodes}: reward {row.mean_reward:.4f}, "
                  f"jam rate {row.jam_rate:.3f}", file=sys.stderr)

    rows, summary = run_experiment(preset, progress=progress)
    write_metrics_csv(rows, args.out)
    if args.summary:
        write_summary_csv([summary], args.summary)
    blocks = ", ".join(f"{b:.4f}" for b in summary.block_means)
    print(f"{preset.name}: seed {seed}, {summary.episodes} episodes, total reward {summary.total_reward:.2f}")
    print(f"block mean rewards: [{blocks}]  ({summary.wall_clock:.1f}s, config {summary.config_digest})")
    print(f"metrics written to {args.out}")
    return EXIT_OK


def cmd_table(args) -> int:
    log = (lambda msg: print(msg, file=sys.stderr)) if args.verbose else None
    report = reproduce_table(args.id, scale=args.scale, seeds=args.seeds, log=log)
    print(report.format())
    out = args.out or f"table{args.id}_{args.scale}.csv"
    report.write_csv(out)
    print(f"report written to {out}")
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_verify(args) -> int:
    from jamshield.verify import run_all

    return EXIT_OK if run_all() else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jamshield", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="train one configuration and write per-episode metrics")
    run.add_argument("--config", required=True, help="flat 'key = value' configuration file")
    run.add_argument("--seed", type=int, default=None, help=f"overrides {SEED_ENV} and the config seed")
    run.add_argument("--out", default="metrics.csv")
    run.add_argument("--summary", default=None)
    run.add_argument("-v", "--verbose", action="store_true")
    run.set_defaults(func=cmd_run)

    table = sub.add_parser("table", help="reproduce one of the reference result tables")
    table.add_argument("--id", type=int, required=True, choices=(2, 3, 5, 6))
    table.add_argument("--scale", choices=("full", "desk"), default="full")
    table.add_argument("--seeds", type=int, default=1)
    table.add_argument("--out", default=None, help="CSV path (default table<ID>_<scale>.csv)")
    table.add_argument("-v", "--verbose", action="store_true")
    table.set_defaults(func=cmd_table)

    verify = sub.add_parser("verify", help="run the analytic and oracle self-checks")
    verify.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
