"""Wires the kernel, book, fundamental, agents and market maker into a run.

A run owns all mutable state.  Trading agents wake on their own exponential
clocks; the market maker refreshes its ladder on a fixed schedule; snapshot
and mark-to-market sampling ride the same event queue so every log shares
one time base.  Fills settle synchronously inside the submitting event, so
cash and share conservation hold exactly at every instant.

Agent ids: mean-reverting traders take 0..n_mr-1, speculators the next
n_spec ids, and the market maker the one after that.
"""

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

from .agents import (MEAN_REVERTING, STARTING_CASH, draw_population,
                     mark_to_market)
from .book import Order, OrderBook, Side
from .config import ScenarioConfig, with_composition, with_seed
from .fundamental import FundamentalState, advance, observe
from .kernel import (Event, EventKind, RunSummary, SimKernel, SimTime,
                     next_wakeup_delay, seconds_to_ns)
from .marketmaker import MarketMaker
from .metrics import BubbleMetrics, compute_metrics
from .rng import agent_stream, fundamental_stream

TRADES_COLUMNS = ("time_ns", "trade_id", "price_ticks", "qty",
                  "buyer_id", "seller_id", "aggressor_side")
L1_COLUMNS = ("time_ns", "best_bid", "bid_qty", "best_ask", "ask_qty", "mid_x2")
MTM_COLUMNS = ("time_ns", "agent_id", "agent_type", "cash", "holdings", "mtm")
FUNDAMENTAL_COLUMNS = ("time_ns", "value")


def l2_columns(depth: int) -> Tuple[str, ...]:
    cols = ["time_ns"]
    for j in range(1, depth + 1):
        cols += [f"bid_px_{j}", f"bid_qty_{j}"]
    for j in range(1, depth + 1):
        cols += [f"ask_px_{j}", f"ask_qty_{j}"]
    return tuple(cols)


@dataclass
class RunLogs:
    """In-memory row lists, one per output table.  Cells are ints, floats or
    '' (empty) for absent book levels; the io module renders them to CSV."""
    trades: List[tuple] = field(default_factory=list)
    l1: List[tuple] = field(default_factory=list)
    l2: List[tuple] = field(default_factory=list)
    mtm: List[tuple] = field(default_factory=list)
    fundamental: List[tuple] = field(default_factory=list)


@dataclass
class RunResult:
    config: ScenarioConfig
    logs: RunLogs
    metrics: BubbleMetrics
    summary: RunSummary
    agents: list
    market_maker: MarketMaker


class Simulation:
    def __init__(self, cfg: ScenarioConfig):
        self.cfg = cfg
        self.kernel = SimKernel()
        self.book = OrderBook()
        self.fund_params = cfg.fundamental
        self.fund_state = FundamentalState(value=cfg.fundamental.mean)
        self.fund_rng = fundamental_stream(cfg.seed)
        self._mid_fallback = max(1, round(cfg.fundamental.mean))

        n_traders = cfg.population.n_mean_reverting + cfg.population.n_speculators
        self.rngs = {i: agent_stream(cfg.seed, i) for i in range(n_traders)}
        self.agents = draw_population(cfg.population, cfg.seed, rngs=self.rngs)
        self.mm = MarketMaker(agent_id=n_traders, params=cfg.market_maker)
        self.accounts = {agent.agent_id: agent for agent in self.agents}
        self.accounts[self.mm.agent_id] = self.mm

        self.logs = RunLogs()
        self.horizon = seconds_to_ns(cfg.horizon_s)
        self._snap_ns = seconds_to_ns(cfg.snapshot_interval_s)
        self._mtm_ns = seconds_to_ns(cfg.mtm_interval_s)
        self._mm_gap_ns = seconds_to_ns(cfg.market_maker.refresh_gap_s)
        # float series on the snapshot grid, kept alongside the integer logs
        # so metrics see unrounded mids
        self.grid_times: List[int] = []
        self.grid_mids: List[float] = []
        self.grid_fundamentals: List[float] = []

        # the market maker seeds the book before anything else can fire
        self.kernel.schedule(0, EventKind.MM_REFRESH)
        self.kernel.schedule(0, EventKind.SNAPSHOT)
        self.kernel.schedule(0, EventKind.MTM_SAMPLE)
        for agent in self.agents:
            delay = next_wakeup_delay(self.rngs[agent.agent_id], agent.mean_gap_s)
            self.kernel.schedule(delay, EventKind.AGENT_WAKEUP, agent.agent_id)

    # ---- helpers ---------------------------------------------------------

    def _mid(self) -> float:
        return self.book.mid_price(self._mid_fallback)

    def _settle(self, trades) -> None:
        """Synchronous settlement: move cash and shares for both parties and
        append to the trades log."""
        for t in trades:
            notional = t.price * t.qty
            buyer = self.accounts[t.buyer_id]
            seller = self.accounts[t.seller_id]
            buyer.cash -= notional
            buyer.holdings += t.qty
            seller.cash += notional
            seller.holdings -= t.qty
            self.logs.trades.append((t.at, t.trade_id, t.price, t.qty,
                                     t.buyer_id, t.seller_id, t.aggressor_side.value))

    # ---- event handlers ----------------------------------------------------

    def _handle(self, event: Event) -> int:
        if event.kind is EventKind.AGENT_WAKEUP:
            return self._agent_wakeup(event.agent_id)
        if event.kind is EventKind.MM_REFRESH:
            return self._mm_refresh()
        if event.kind is EventKind.SNAPSHOT:
            self._sample_books()
            self.kernel.schedule(self.kernel.now + self._snap_ns, EventKind.SNAPSHOT)
            return 0
        if event.kind is EventKind.MTM_SAMPLE:
            self._sample_mtm()
            self.kernel.schedule(self.kernel.now + self._mtm_ns, EventKind.MTM_SAMPLE)
            return 0
        raise RuntimeError(f"unhandled event kind {event.kind}")

    def _agent_wakeup(self, agent_id: int) -> int:
        agent = self.agents[agent_id]
        rng = self.rngs[agent_id]
        at = self.kernel.now
        executed = 0
        if agent.agent_type == MEAN_REVERTING:
            if agent.open_order_id is not None:
                self.book.cancel(agent.open_order_id)
                agent.open_order_id = None
            advance(self.fund_state, at, self.fund_params, self.fund_rng)
            # observation noise can dip below zero near the price floor; the
            # valuation blend needs a positive input
            obs = max(1.0, observe(self.fund_state, self.fund_params, rng))
            intent = agent.decide(obs, self._mid(), self.book.best_bid(),
                                  self.book.best_ask(), rng)
            if intent is not None:
                order = Order(self.book.next_order_id(), agent_id, intent.side,
                              intent.price, intent.qty, at)
                trades, resting = self.book.submit_limit(order)
                self._settle(trades)
                if resting is not None:
                    agent.open_order_id = resting.id
                executed = len(trades)
        else:
            intent = agent.decide(self._mid(), rng)
            if intent is not None:
                trades = self.book.submit_market(intent.side, intent.qty, agent_id, at)
                self._settle(trades)
                if intent.side is Side.BUY and trades:
                    agent.on_buy_fill(self._mid())
                executed = len(trades)
        delay = next_wakeup_delay(rng, agent.mean_gap_s)
        self.kernel.schedule(at + delay, EventKind.AGENT_WAKEUP, agent_id)
        return executed

    def _mm_refresh(self) -> int:
        at = self.kernel.now
        for oid in self.mm.open_order_ids:
            self.book.cancel(oid)
        self.mm.open_order_ids.clear()
        self.mm.observe(self.book.spread(), self.book.cum_volume)
        bids, asks = self.mm.quotes(self._mid())
        executed = 0
        for side, ladder in ((Side.BUY, bids), (Side.SELL, asks)):
            for price, qty in ladder:
                order = Order(self.book.next_order_id(), self.mm.agent_id,
                              side, price, qty, at)
                trades, resting = self.book.submit_limit(order)
                self._settle(trades)
                if resting is not None:
                    self.mm.open_order_ids.append(resting.id)
                executed += len(trades)
        self.kernel.schedule(at + self._mm_gap_ns, EventKind.MM_REFRESH)
        return executed

    def _sample_books(self) -> None:
        at = self.kernel.now
        advance(self.fund_state, at, self.fund_params, self.fund_rng)
        snap = self.book.snapshot(self.cfg.snapshot_depth, at, self._mid_fallback)
        bid, ask = self.book.best_bid(), self.book.best_ask()
        self.logs.l1.append((
            at,
            bid if bid is not None else "",
            self.book.depth_at(Side.BUY, bid) if bid is not None else "",
            ask if ask is not None else "",
            self.book.depth_at(Side.SELL, ask) if ask is not None else "",
            round(2 * snap.mid),
        ))
        row = [at]
        for levels in (snap.bids, snap.asks):
            for j in range(self.cfg.snapshot_depth):
                if j < len(levels):
                    row += [levels[j][0], levels[j][1]]
                else:
                    row += ["", ""]
        self.logs.l2.append(tuple(row))
        self.logs.fundamental.append((at, self.fund_state.value))
        self.grid_times.append(at)
        self.grid_mids.append(snap.mid)
        self.grid_fundamentals.append(self.fund_state.value)

    def _sample_mtm(self) -> None:
        at = self.kernel.now
        mid = self._mid()
        for agent in self.agents:
            self.logs.mtm.append((at, agent.agent_id, agent.agent_type,
                                  agent.cash, agent.holdings,
                                  mark_to_market(agent.cash, agent.holdings, mid)))
        self.logs.mtm.append((at, self.mm.agent_id, self.mm.agent_type,
                              self.mm.cash, self.mm.inventory,
                              mark_to_market(self.mm.cash, self.mm.inventory, mid)))

    # ---- run -----------------------------------------------------------

    def run(self) -> RunResult:
        summary = self.kernel.run_until(self.horizon, self._handle)
        # the event loop stops strictly before the horizon; close the grids
        # at the horizon itself so row counts follow floor(horizon/interval)+1
        self.kernel.now = self.horizon
        if self.horizon % self._snap_ns == 0:
            self._sample_books()
        self._sample_mtm()
        summary.clock = self.horizon

        spec_finals = [mark_to_market(a.cash, a.holdings, self._mid())
                       for a in self.agents if a.agent_type != MEAN_REVERTING]
        metrics = compute_metrics(self.grid_times, self.grid_mids,
                                  self.grid_fundamentals, spec_finals,
                                  float(STARTING_CASH))
        return RunResult(self.cfg, self.logs, metrics, summary,
                         self.agents, self.mm)


def run_scenario(cfg: ScenarioConfig) -> RunResult:
    """Build a fresh simulation from the config and run it to the horizon."""
    return Simulation(cfg).run()


METRIC_FIELDS = ("max_abs_rel_deviation", "mean_abs_rel_deviation", "rmse_rel",
                 "time_of_peak", "realized_vol", "spec_final_mtm_median",
                 "spec_fraction_profitable")


def _metrics_row(metrics: Optional[BubbleMetrics], error: Optional[str]) -> dict:
    row = {name: (getattr(metrics, name) if metrics is not None else None)
           for name in METRIC_FIELDS}
    row["error"] = error
    return row


def sweep_seeds(cfg: ScenarioConfig, seeds: Sequence[int],
                runner: Callable[[ScenarioConfig], RunResult] = run_scenario) -> List[dict]:
    """One independent run per seed.  A failing member is recorded in its row
    ('error' column) without aborting the rest of the sweep."""
    if not seeds:
        raise ValueError("sweep_seeds needs at least one seed")
    table = []
    for seed in seeds:
        try:
            result = runner(with_seed(cfg, seed))
            row = _metrics_row(result.metrics, None)
        except Exception as exc:  # noqa: BLE001 - per-member isolation is the contract
            row = _metrics_row(None, str(exc))
        row = {"seed": seed, **row}
        table.append(row)
    return table


def sweep_compositions(cfg: ScenarioConfig,
                       compositions: Sequence[Tuple[int, int]],
                       runner: Callable[[ScenarioConfig], RunResult] = run_scenario) -> List[dict]:
    """One run per (n_mean_reverting, n_speculators) pair at the config's seed."""
    table = []
    for n_mr, n_spec in compositions:
        try:
            result = runner(with_composition(cfg, n_mr, n_spec))
            row = _metrics_row(result.metrics, None)
        except Exception as exc:  # noqa: BLE001
            row = _metrics_row(None, str(exc))
        row = {"n_mean_reverting": n_mr, "n_speculators": n_spec, **row}
        table.append(row)
    return table


DEFAULT_COMPOSITIONS = ((500, 0), (400, 100), (300, 200), (250, 250),
                        (200, 300), (100, 400))
