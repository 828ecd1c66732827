"""The two trading-agent types and population drawing.

Mean-reverting agents keep a private long-term value belief and a running
short-term estimate fed by noisy observations; they buy when their blended
valuation is above the mid and sell when below.  Speculative agents watch
the maximum log return over their recent mid-price history and market-buy
when it clears their trigger, exiting the whole position on a take-profit
or stop-loss test of mark-to-market wealth.  All per-agent parameters are
drawn from configured distributions on the agent's own random stream, so a
population is a pure function of (config, seed).
"""

import math
from dataclasses import dataclass, field
from collections import deque
from typing import Optional

import numpy as np

from .book import Side

MEAN_REVERTING = "mean_reverting"
SPECULATOR = "speculator"
MARKET_MAKER = "market_maker"

STARTING_CASH = 1_000_000_000  # 10 million currency units, in cents


@dataclass(frozen=True)
class OrderIntent:
    """What an agent wants done this wakeup; the runner executes it."""
    side: Side
    qty: int
    price: Optional[int] = None   # None -> market order
    resting_hint: bool = False    # True when priced passively into a one-sided book


@dataclass(frozen=True)
class PopulationConfig:
    """Distribution hyperparameters for drawing a population.

    None of these are pinned by the underlying model description, so they
    are all explicit artifact defaults (see the config module for the
    file-level keys).
    """
    n_mean_reverting: int = 500
    n_speculators: int = 0
    # mean-reverting agents
    mr_belief_mean: float = 100_000.0
    mr_belief_sd: float = 1_000.0
    mr_reversion_low: float = 0.0
    mr_reversion_high: float = 1.0
    mr_news_low: float = 0.0
    mr_news_high: float = 1.0
    mr_mean_gap_s: float = 60.0
    mr_size_mu: float = math.log(100.0)
    mr_size_sigma: float = 0.7
    # speculators
    spec_mean_gap_s: float = 60.0
    spec_size_mu: float = math.log(100.0)
    spec_size_sigma: float = 0.7
    spec_take_profit_scale: float = 0.3    # alpha = 1 + Exp(scale)
    spec_stop_loss_scale: float = 0.4      # beta ~ Exp(scale), redrawn until < 1
    spec_buy_trigger_scale: float = 0.03   # r_b ~ Exp(scale)
    spec_window_mean: float = 20.0         # N ~ Poisson(mean), floored at 2
    spec_leverage_cap: float = 2.0         # max notional as a multiple of starting cash

    def __post_init__(self):
        if self.n_mean_reverting < 0:
            raise ValueError(f"n_mean_reverting must be >= 0, got {self.n_mean_reverting}")
        if self.n_speculators < 0:
            raise ValueError(f"n_speculators must be >= 0, got {self.n_speculators}")
        if self.mr_belief_mean <= 0:
            raise ValueError(f"mr_belief_mean must be positive, got {self.mr_belief_mean}")
        if self.mr_belief_sd < 0:
            raise ValueError(f"mr_belief_sd must be >= 0, got {self.mr_belief_sd}")
        if not 0.0 <= self.mr_reversion_low <= self.mr_reversion_high <= 1.0:
            raise ValueError("mr_reversion_low/high must satisfy 0 <= low <= high <= 1")
        if not 0.0 <= self.mr_news_low <= self.mr_news_high <= 1.0:
            raise ValueError("mr_news_low/high must satisfy 0 <= low <= high <= 1")
        for key in ("mr_mean_gap_s", "spec_mean_gap_s", "mr_size_sigma", "spec_size_sigma",
                    "spec_take_profit_scale", "spec_stop_loss_scale",
                    "spec_buy_trigger_scale", "spec_window_mean"):
            if getattr(self, key) <= 0:
                raise ValueError(f"{key} must be positive, got {getattr(self, key)}")
        if self.spec_leverage_cap < 1.0:
            raise ValueError(f"spec_leverage_cap must be >= 1, got {self.spec_leverage_cap}")


# ---------------------------------------------------------------------------
# mean-reverting value traders


@dataclass
class MeanRevertingAgent:
    agent_id: int
    value_belief: float        # v-bar, long-term belief in cents
    reversion_speed: float     # theta in [0, 1]
    news_weight: float         # kappa_news in [0, 1]
    mean_gap_s: float
    size_mu: float
    size_sigma: float
    cash: int = STARTING_CASH
    holdings: int = 0
    short_estimate: float = field(default=0.0)  # s-hat; seeded with the belief
    open_order_id: Optional[int] = None
    agent_type: str = MEAN_REVERTING

    def __post_init__(self):
        if not 0.0 <= self.reversion_speed <= 1.0:
            raise ValueError(f"reversion_speed must lie in [0,1], got {self.reversion_speed}")
        if not 0.0 <= self.news_weight <= 1.0:
            raise ValueError(f"news_weight must lie in [0,1], got {self.news_weight}")
        if self.value_belief <= 0:
            raise ValueError(f"value_belief must be positive, got {self.value_belief}")
        if self.short_estimate == 0.0:
            self.short_estimate = self.value_belief

    def valuation(self, observation: float) -> float:
        """Blend the observation into the short-term estimate, then revert it
        toward the long-term belief:

            s-hat <- (1 - k_news) * s-hat + k_news * obs
            value  = v-bar + (s-hat - v-bar) * (1 - theta)

        With k_news = 1, theta = 0 the agent takes the observation at face
        value; with theta = 1 it never budges from its belief.
        """
        self.short_estimate = ((1.0 - self.news_weight) * self.short_estimate
                               + self.news_weight * observation)
        return self.value_belief + (self.short_estimate - self.value_belief) * (1.0 - self.reversion_speed)

    def decide(self, observation: float, mid: float, best_bid: Optional[int],
               best_ask: Optional[int], rng: np.random.Generator) -> Optional[OrderIntent]:
        """Buy (marketable limit at the ask) if valuation > mid, sell at the bid
        if below, nothing on a tie.  Against a one-sided book the order is
        priced at the mid rounded toward the passive side so it rests.
        """
        value = self.valuation(observation)
        if value == mid:
            return None
        qty = draw_order_size(rng, self.size_mu, self.size_sigma)
        if value > mid:
            if best_ask is not None:
                return OrderIntent(Side.BUY, qty, best_ask)
            return OrderIntent(Side.BUY, qty, max(1, math.floor(mid)), resting_hint=True)
        if best_bid is not None:
            return OrderIntent(Side.SELL, qty, best_bid)
        return OrderIntent(Side.SELL, qty, max(1, math.ceil(mid)), resting_hint=True)


# ---------------------------------------------------------------------------
# speculators


@dataclass
class SpeculativeAgent:
    agent_id: int
    take_profit: float         # alpha > 1
    stop_loss: float           # beta in (0, 1)
    buy_trigger: float         # r_b > 0, log return
    window: int                # N >= 2 mid prices
    mean_gap_s: float
    size_mu: float
    size_sigma: float
    leverage_cap: float
    cash: int = STARTING_CASH
    holdings: int = 0          # short selling not allowed
    w0: int = STARTING_CASH    # starting cash
    w_lt: float = float(STARTING_CASH)  # wealth at the moment of the last buy
    mid_history: deque = field(default_factory=deque)
    agent_type: str = SPECULATOR

    def __post_init__(self):
        if self.take_profit <= 1.0:
            raise ValueError(f"take_profit must exceed 1, got {self.take_profit}")
        if not 0.0 < self.stop_loss < 1.0:
            raise ValueError(f"stop_loss must lie in (0,1), got {self.stop_loss}")
        if self.buy_trigger <= 0.0:
            raise ValueError(f"buy_trigger must be positive, got {self.buy_trigger}")
        if self.window < 2:
            raise ValueError(f"window must be >= 2, got {self.window}")
        self.mid_history = deque(self.mid_history, maxlen=self.window)

    def decide(self, mid: float, rng: np.random.Generator) -> Optional[OrderIntent]:
        """One strategy step: exit check first, buy check only if no exit.

        Exit (market-sell everything): holdings > 0 and wealth above the
        take-profit multiple of the last-buy wealth or below the stop-loss
        fraction of starting cash.  Otherwise buy at market when the max
        recent log return reaches the trigger, capped so post-trade
        notional stays within the leverage limit.
        """
        self.mid_history.append(mid)
        wealth = mark_to_market(self.cash, self.holdings, mid)
        if self.holdings > 0 and (wealth > self.take_profit * self.w_lt
                                  or wealth < self.stop_loss * self.w0):
            return OrderIntent(Side.SELL, self.holdings)
        signal = max_log_return(self.mid_history)
        if signal is not None and signal >= self.buy_trigger:
            qty = draw_order_size(rng, self.size_mu, self.size_sigma)
            headroom = math.floor(self.leverage_cap * self.w0 / mid) - self.holdings
            qty = min(qty, headroom)
            if qty > 0:
                return OrderIntent(Side.BUY, qty)
        return None

    def on_buy_fill(self, mid_after_fill: float) -> None:
        """Record wealth at the moment of the last buy (take-profit reference)."""
        self.w_lt = mark_to_market(self.cash, self.holdings, mid_after_fill)


def max_log_return(mids) -> Optional[float]:
    """Maximum log return over consecutive mid prices; None with fewer than 2
    observations (no signal, treated as below any trigger)."""
    if len(mids) < 2:
        return None
    it = iter(mids)
    prev = next(it)
    best = -math.inf
    for m in it:
        r = math.log(m / prev)
        if r > best:
            best = r
        prev = m
    return best


def mark_to_market(cash: float, holdings: int, mid: float) -> float:
    """Portfolio wealth: cash plus holdings valued at the mid."""
    if mid <= 0:
        raise ValueError(f"mid must be positive, got {mid}")
    return cash + holdings * mid


def draw_order_size(rng: np.random.Generator, mu: float, sigma: float) -> int:
    """Log-normal order size, rounded up to at least one share."""
    return max(1, math.ceil(rng.lognormal(mu, sigma)))


# ---------------------------------------------------------------------------
# population


def draw_mean_reverting(agent_id: int, cfg: PopulationConfig,
                        rng: np.random.Generator) -> MeanRevertingAgent:
    belief = rng.normal(cfg.mr_belief_mean, cfg.mr_belief_sd)
    while belief <= 0:
        belief = rng.normal(cfg.mr_belief_mean, cfg.mr_belief_sd)
    return MeanRevertingAgent(
        agent_id=agent_id,
        value_belief=belief,
        reversion_speed=rng.uniform(cfg.mr_reversion_low, cfg.mr_reversion_high),
        news_weight=rng.uniform(cfg.mr_news_low, cfg.mr_news_high),
        mean_gap_s=cfg.mr_mean_gap_s,
        size_mu=cfg.mr_size_mu,
        size_sigma=cfg.mr_size_sigma,
    )


def draw_speculator(agent_id: int, cfg: PopulationConfig,
                    rng: np.random.Generator) -> SpeculativeAgent:
    take_profit = 1.0 + rng.exponential(cfg.spec_take_profit_scale)
    stop_loss = rng.exponential(cfg.spec_stop_loss_scale)
    while not 0.0 < stop_loss < 1.0:
        stop_loss = rng.exponential(cfg.spec_stop_loss_scale)
    return SpeculativeAgent(
        agent_id=agent_id,
        take_profit=take_profit,
        stop_loss=stop_loss,
        buy_trigger=rng.exponential(cfg.spec_buy_trigger_scale),
        window=max(2, int(rng.poisson(cfg.spec_window_mean))),
        mean_gap_s=cfg.spec_mean_gap_s,
        size_mu=cfg.spec_size_mu,
        size_sigma=cfg.spec_size_sigma,
        leverage_cap=cfg.spec_leverage_cap,
    )


def draw_population(cfg: PopulationConfig, seed: int,
                    rngs: Optional[dict] = None) -> list:
    """All trading agents for a run: ids 0..n_mr-1 are mean-reverting,
    n_mr..n_mr+n_spec-1 speculators.  Each agent's parameters come from its
    own stream, so the population does not depend on processing order.

    Pass `rngs` (agent_id -> Generator) to draw from generators the caller
    keeps using afterwards; parameter draws then consume the head of each
    stream and runtime draws continue from there.
    """
    from .rng import agent_stream

    if cfg.n_mean_reverting < 0 or cfg.n_speculators < 0:
        raise ValueError("population counts must be non-negative")
    if rngs is None:
        n_total = cfg.n_mean_reverting + cfg.n_speculators
        rngs = {i: agent_stream(seed, i) for i in range(n_total)}
    agents = []
    for i in range(cfg.n_mean_reverting):
        agents.append(draw_mean_reverting(i, cfg, rngs[i]))
    for j in range(cfg.n_speculators):
        agent_id = cfg.n_mean_reverting + j
        agents.append(draw_speculator(agent_id, cfg, rngs[agent_id]))
    return agents
