"""Bubble metrics computed from the snapshot-grid mid and fundamental series.

"Bubble" is operationalized as relative deviation of the traded mid from
the fundamental value; a run is summarized by the maximum and the time
average of that deviation, its RMSE, when the maximum occurred, realized
volatility of the mid, and how the speculators ended up.
"""

import math
import statistics
from dataclasses import dataclass
from typing import Optional, Sequence


@dataclass(frozen=True)
class BubbleMetrics:
    max_abs_rel_deviation: float   # max over the grid of |mid - fund| / fund
    mean_abs_rel_deviation: float  # time average of the same quantity
    rmse_rel: float
    time_of_peak: int              # ns of the (first) maximum deviation
    realized_vol: float            # sqrt(sum of squared log returns / elapsed seconds)
    spec_final_mtm_median: Optional[float]    # None when the run has no speculators
    spec_fraction_profitable: Optional[float]  # share of speculators ending above w0


def compute_metrics(times: Sequence[int], mids: Sequence[float],
                    fundamentals: Sequence[float],
                    spec_final_mtms: Sequence[float],
                    w0: float) -> BubbleMetrics:
    """All series are aligned to the snapshot grid; spec_final_mtms holds one
    end-of-run mark-to-market value per speculator (possibly empty)."""
    n = len(times)
    if n == 0:
        raise ValueError("cannot compute metrics from empty series")
    if len(mids) != n or len(fundamentals) != n:
        raise ValueError(
            f"series lengths differ: {n} times, {len(mids)} mids, {len(fundamentals)} fundamentals")

    max_dev = -1.0
    peak_at = times[0]
    sum_dev = 0.0
    sum_sq = 0.0
    for t, mid, fund in zip(times, mids, fundamentals):
        if fund <= 0 or mid <= 0:
            raise ValueError(f"non-positive price in series at t={t}")
        dev = abs(mid - fund) / fund
        sum_dev += dev
        sum_sq += dev * dev
        if dev > max_dev:
            max_dev = dev
            peak_at = t

    realized = 0.0
    if n >= 2 and times[-1] > times[0]:
        sum_r2 = 0.0
        for i in range(1, n):
            r = math.log(mids[i] / mids[i - 1])
            sum_r2 += r * r
        elapsed_s = (times[-1] - times[0]) / 1_000_000_000
        realized = math.sqrt(sum_r2 / elapsed_s)

    median = None
    profitable = None
    if spec_final_mtms:
        median = statistics.median(spec_final_mtms)
        profitable = sum(1 for w in spec_final_mtms if w > w0) / len(spec_final_mtms)

    return BubbleMetrics(
        max_abs_rel_deviation=max_dev,
        mean_abs_rel_deviation=sum_dev / n,
        rmse_rel=math.sqrt(sum_sq / n),
        time_of_peak=peak_at,
        realized_vol=realized,
        spec_final_mtm_median=median,
        spec_fraction_profitable=profitable,
    )
