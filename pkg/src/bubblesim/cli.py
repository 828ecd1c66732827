"""Command-line entry point.

Subcommands:
  run                 one simulation; writes CSV logs, metrics and plots
  sweep-seeds         same scenario across a seed range; per-seed metrics table
  sweep-compositions  vary the agent mix at a fixed seed; per-mix metrics table
  plot                render the figures for one run without the CSV logs

Output directory resolution: --out flag, else the BUBBLESIM_OUT environment
variable, else ./out.  Any validation problem exits nonzero with a message
naming the offending input.
"""

import argparse
import dataclasses
import os
import sys

from .config import (ConfigError, ScenarioConfig, load_config, with_seed)
from .io import write_run_artifacts, write_sweep_table
from .simulation import (DEFAULT_COMPOSITIONS, run_scenario, sweep_compositions,
                         sweep_seeds)

ENV_OUT = "BUBBLESIM_OUT"


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="PATH",
                        help="YAML scenario config; defaults apply when omitted")
    parser.add_argument("--seed", type=int, metavar="U64",
                        help="override the config's seed")
    parser.add_argument("--out", metavar="DIR",
                        help=f"output directory (default ${ENV_OUT} or ./out)")
    parser.add_argument("--snapshot-interval", type=float, metavar="S",
                        dest="snapshot_interval",
                        help="override the config's snapshot interval, seconds")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bubblesim",
        description="Order-book market simulator with mean-reverting traders, "
                    "max-return speculators and a ladder market maker.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="single simulation with full artifacts")
    _add_common(p_run)
    p_run.add_argument("--no-plots", action="store_true",
                       help="skip figure rendering")

    p_seeds = sub.add_parser("sweep-seeds", help="one run per seed")
    _add_common(p_seeds)
    p_seeds.add_argument("--seeds", default="2023:2042", metavar="A:B|A,B,...",
                         help="inclusive range 'first:last' or comma list "
                              "(default 2023:2042)")

    p_comp = sub.add_parser("sweep-compositions",
                            help="one run per agent mix at a fixed seed")
    _add_common(p_comp)
    p_comp.add_argument("--compositions", metavar="MR/SPEC,...",
                        default=",".join(f"{a}/{b}" for a, b in DEFAULT_COMPOSITIONS),
                        help="comma list of n_mean_reverting/n_speculators pairs")

    p_plot = sub.add_parser("plot", help="figures only, no CSV logs")
    _add_common(p_plot)
    return parser


def _resolve_out(args, cfg: ScenarioConfig) -> str:
    """--out beats the environment override, which beats the config value."""
    if args.out:
        return args.out
    return os.environ.get(ENV_OUT) or cfg.output_dir


def _resolve_config(args) -> ScenarioConfig:
    cfg = load_config(args.config) if args.config else ScenarioConfig()
    if args.seed is not None:
        cfg = with_seed(cfg, args.seed)
    if args.snapshot_interval is not None:
        cfg = dataclasses.replace(cfg, snapshot_interval_s=args.snapshot_interval)
    return cfg


def _parse_seeds(text: str):
    if ":" in text:
        first, _, last = text.partition(":")
        lo, hi = int(first), int(last)
        if hi < lo:
            raise ConfigError(f"empty seed range '{text}'")
        return list(range(lo, hi + 1))
    return [int(part) for part in text.split(",") if part.strip()]


def _parse_compositions(text: str):
    pairs = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            a, _, b = part.partition("/")
            pairs.append((int(a), int(b)))
        except ValueError as exc:
            raise ConfigError(f"bad composition '{part}': expected MR/SPEC") from exc
    if not pairs:
        raise ConfigError("no compositions given")
    return pairs


def _cmd_run(args) -> int:
    cfg = _resolve_config(args)
    out_dir = _resolve_out(args, cfg)
    result = run_scenario(cfg)
    paths = write_run_artifacts(result, out_dir)
    if not args.no_plots:
        from .plots import emit_plots
        paths.update(emit_plots(result, out_dir))
    print(f"seed {cfg.seed}: {result.summary.events_processed} events, "
          f"{result.summary.trades_executed} trades, "
          f"max |mid-fund|/fund = {result.metrics.max_abs_rel_deviation:.4f}")
    print(f"artifacts in {out_dir}: " + ", ".join(sorted(paths)))
    return 0


def _cmd_sweep_seeds(args) -> int:
    cfg = _resolve_config(args)
    seeds = _parse_seeds(args.seeds)
    out_dir = _resolve_out(args, cfg)
    os.makedirs(out_dir, exist_ok=True)
    table = sweep_seeds(cfg, seeds)
    path = os.path.join(out_dir, "sweep_seeds.csv")
    write_sweep_table(table, ("seed",), path)
    failures = [row for row in table if row["error"]]
    print(f"{len(table)} seeds -> {path} ({len(failures)} failed)")
    return 1 if failures else 0


def _cmd_sweep_compositions(args) -> int:
    cfg = _resolve_config(args)
    pairs = _parse_compositions(args.compositions)
    out_dir = _resolve_out(args, cfg)
    os.makedirs(out_dir, exist_ok=True)
    table = sweep_compositions(cfg, pairs)
    path = os.path.join(out_dir, "sweep_compositions.csv")
    write_sweep_table(table, ("n_mean_reverting", "n_speculators"), path)
    failures = [row for row in table if row["error"]]
    print(f"{len(table)} compositions -> {path} ({len(failures)} failed)")
    return 1 if failures else 0


def _cmd_plot(args) -> int:
    from .plots import emit_plots
    cfg = _resolve_config(args)
    out_dir = _resolve_out(args, cfg)
    result = run_scenario(cfg)
    paths = emit_plots(result, out_dir)
    print("figures: " + ", ".join(sorted(paths.values())))
    return 0


_COMMANDS = {
    "run": _cmd_run,
    "sweep-seeds": _cmd_sweep_seeds,
    "sweep-compositions": _cmd_sweep_compositions,
    "plot": _cmd_plot,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
