"""Static SVG figures from a finished run.

Three views of a run: the mid against the fundamental, every agent's
mark-to-market trajectory colored by type, and the distribution of final
mark-to-market per type.  Rendering targets files only (Agg backend), so
plots work on headless machines.
"""

import os
from collections import defaultdict

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .agents import MARKET_MAKER, MEAN_REVERTING, SPECULATOR
from .simulation import RunResult

# stable ids inside the SVG output so repeated renders diff clean
plt.rcParams["svg.hashsalt"] = "bubblesim"

_COLORS = {MEAN_REVERTING: "tab:blue", SPECULATOR: "tab:red",
           MARKET_MAKER: "tab:green"}
_SAVE_OPTS = {"format": "svg", "metadata": {"Date": None}}


def _grid_seconds(times_ns):
    return [t / 1e9 for t in times_ns]


def plot_price_paths(result: RunResult, path) -> None:
    """Mid price and fundamental value on the snapshot grid."""
    fig, ax = plt.subplots(figsize=(9, 4.5))
    xs = _grid_seconds([row[0] for row in result.logs.fundamental])
    fund = [row[1] for row in result.logs.fundamental]
    mids = [row[5] / 2 for row in result.logs.l1]
    ax.plot(xs, mids, color="tab:blue", linewidth=0.9, label="mid price")
    ax.plot(xs, fund, color="black", linewidth=0.9, linestyle="--",
            label="fundamental value")
    ax.set_xlabel("time (s)")
    ax.set_ylabel("price (ticks)")
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(path, **_SAVE_OPTS)
    plt.close(fig)


def plot_mtm_trajectories(result: RunResult, path) -> None:
    """One line per agent, colored by agent type."""
    series = defaultdict(lambda: ([], []))
    types = {}
    for at, agent_id, agent_type, _cash, _holdings, mtm in result.logs.mtm:
        xs, ys = series[agent_id]
        xs.append(at / 1e9)
        ys.append(mtm)
        types[agent_id] = agent_type
    fig, ax = plt.subplots(figsize=(9, 4.5))
    seen = set()
    for agent_id in sorted(series):
        agent_type = types[agent_id]
        xs, ys = series[agent_id]
        label = agent_type if agent_type not in seen else None
        seen.add(agent_type)
        ax.plot(xs, ys, color=_COLORS[agent_type], linewidth=0.5, alpha=0.4,
                label=label)
    ax.set_xlabel("time (s)")
    ax.set_ylabel("mark to market (ticks)")
    if seen:
        ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(path, **_SAVE_OPTS)
    plt.close(fig)


def plot_final_mtm_hist(result: RunResult, path) -> None:
    """Distribution of end-of-run mark-to-market, one panel per agent type."""
    last_at = max((row[0] for row in result.logs.mtm), default=None)
    finals = defaultdict(list)
    for at, _agent_id, agent_type, _cash, _holdings, mtm in result.logs.mtm:
        if at == last_at:
            finals[agent_type].append(mtm)
    present = [t for t in (MEAN_REVERTING, SPECULATOR, MARKET_MAKER) if finals[t]]
    n = max(1, len(present))
    fig, axes = plt.subplots(1, n, figsize=(4.5 * n, 4.0), squeeze=False)
    for ax, agent_type in zip(axes[0], present):
        ax.hist(finals[agent_type], bins=30, color=_COLORS[agent_type])
        ax.set_title(agent_type.replace("_", " "))
        ax.set_xlabel("final mark to market (ticks)")
        ax.set_ylabel("agents")
    if not present:
        axes[0][0].set_xlabel("final mark to market (ticks)")
    fig.tight_layout()
    fig.savefig(path, **_SAVE_OPTS)
    plt.close(fig)


def emit_plots(result: RunResult, out_dir) -> dict:
    """All three figures as SVG files; returns {figure name: path}."""
    os.makedirs(out_dir, exist_ok=True)
    paths = {
        "price_paths": os.path.join(out_dir, "price_paths.svg"),
        "mtm_trajectories": os.path.join(out_dir, "mtm_trajectories.svg"),
        "final_mtm_hist": os.path.join(out_dir, "final_mtm_hist.svg"),
    }
    plot_price_paths(result, paths["price_paths"])
    plot_mtm_trajectories(result, paths["mtm_trajectories"])
    plot_final_mtm_hist(result, paths["final_mtm_hist"])
    return paths
