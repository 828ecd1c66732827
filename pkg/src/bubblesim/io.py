"""Rendering run logs, metrics and sweep tables to CSV files.

Cells are written with a fixed format per type (ints as decimal, floats via
repr, None/missing as empty) and a bare "\n" line terminator, so two runs
that produce equal rows produce byte-identical files.
"""

import os

from .config import save_config
from .metrics import BubbleMetrics
from .simulation import (FUNDAMENTAL_COLUMNS, L1_COLUMNS, METRIC_FIELDS,
                         MTM_COLUMNS, TRADES_COLUMNS, RunResult, l2_columns)


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(path, header, rows) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join(_cell(cell) for cell in row) + "\n")
    except OSError as exc:
        raise OSError(f"failed writing {path}: {exc}") from exc


def metrics_row(metrics: BubbleMetrics) -> tuple:
    return tuple(getattr(metrics, name) for name in METRIC_FIELDS)


def write_run_artifacts(result: RunResult, out_dir) -> dict:
    """Write every log of a finished run plus its metrics and the resolved
    config; returns {table name: file path}."""
    os.makedirs(out_dir, exist_ok=True)
    logs = result.logs
    paths = {}

    def emit(name, header, rows):
        paths[name] = os.path.join(out_dir, f"{name}.csv")
        write_csv(paths[name], header, rows)

    emit("trades", TRADES_COLUMNS, logs.trades)
    emit("l1", L1_COLUMNS, logs.l1)
    emit("l2", l2_columns(result.config.snapshot_depth), logs.l2)
    emit("mtm", MTM_COLUMNS, logs.mtm)
    emit("fundamental", FUNDAMENTAL_COLUMNS, logs.fundamental)
    emit("metrics", METRIC_FIELDS, [metrics_row(result.metrics)])
    paths["config"] = os.path.join(out_dir, "config.yaml")
    save_config(result.config, paths["config"])
    return paths


def write_sweep_table(rows, key_columns, path) -> None:
    """Sweep output: one row per member, key columns first, then the metric
    fields and an error column (empty unless that member failed)."""
    header = tuple(key_columns) + METRIC_FIELDS + ("error",)
    table = [tuple(row[col] for col in header) for row in rows]
    write_csv(path, header, table)
