"""Deterministic discrete-event engine.

Simulation time is an integer count of nanoseconds since the start of the
run.  Events are totally ordered by (fire_at, seq) where seq is a global
insertion counter, so ties at the same instant are processed first-in
first-out and two runs that schedule the same events produce identical
processing logs.
"""

import heapq
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

import numpy as np

NS_PER_SEC = 1_000_000_000

SimTime = int  # nanoseconds since simulation start


def seconds_to_ns(seconds: float) -> SimTime:
    return int(round(seconds * NS_PER_SEC))


class EventKind(Enum):
    AGENT_WAKEUP = "agent_wakeup"
    FILL_NOTIFICATION = "fill_notification"
    MM_REFRESH = "mm_refresh"
    SNAPSHOT = "snapshot"
    MTM_SAMPLE = "mtm_sample"


@dataclass(frozen=True)
class Event:
    fire_at: SimTime
    seq: int
    kind: EventKind
    agent_id: int = -1
    payload: object = None


@dataclass
class RunSummary:
    events_processed: int = 0
    trades_executed: int = 0
    clock: SimTime = 0


class SimKernel:
    """Time-ordered event queue plus the simulation clock.

    The kernel knows nothing about markets: it hands each popped event to
    the handler passed to run_until, which returns the number of trades
    that event caused (so the summary can report both counts).
    """

    def __init__(self):
        self._heap: list[tuple[SimTime, int, Event]] = []
        self._seq = 0
        self.now: SimTime = 0

    def __len__(self) -> int:
        return len(self._heap)

    def schedule(self, fire_at: SimTime, kind: EventKind,
                 agent_id: int = -1, payload: object = None) -> Event:
        """Insert an event; scheduling before the current clock is a bug and aborts."""
        if fire_at < self.now:
            raise RuntimeError(
                f"cannot schedule {kind.value} at t={fire_at} ns: clock is already {self.now} ns")
        event = Event(fire_at, self._seq, kind, agent_id, payload)
        self._seq += 1
        heapq.heappush(self._heap, (fire_at, event.seq, event))
        return event

    def run_until(self, horizon: SimTime,
                  handler: Callable[[Event], Optional[int]]) -> RunSummary:
        """Process every queued event with fire_at < horizon, in (fire_at, seq) order.

        The clock ends at the horizon if events remain beyond it, otherwise
        at the last processed event's time (an empty queue ends the run early).
        """
        summary = RunSummary()
        heap = self._heap
        while heap and heap[0][0] < horizon:
            fire_at, _, event = heapq.heappop(heap)
            self.now = fire_at
            trades = handler(event)
            summary.events_processed += 1
            if trades:
                summary.trades_executed += trades
        if heap:
            self.now = horizon
        summary.clock = self.now
        return summary


def next_wakeup_delay(rng: np.random.Generator, mean_gap_s: float) -> SimTime:
    """Exponential waiting time until an agent's next market visit.

    delta = -mean_gap * ln(u) with u uniform on (0, 1], converted to
    nanoseconds and floored so the delay is at least 1 ns.
    """
    if mean_gap_s <= 0:
        raise ValueError(f"mean_gap_s must be positive, got {mean_gap_s}")
    u = 1.0 - rng.random()  # uniform on (0, 1]
    delta_ns = int(-mean_gap_s * math.log(u) * NS_PER_SEC)
    return max(1, delta_ns)
