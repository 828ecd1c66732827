"""Discrete-event simulator of a limit-order-book market in which
speculators chasing recent maximum returns inflate price bubbles against a
mean-reverting fundamental, with an inventory-skewing market maker quoting
both sides throughout."""

from .agents import (MeanRevertingAgent, OrderIntent, PopulationConfig,
                     SpeculativeAgent, draw_population, mark_to_market,
                     max_log_return)
from .book import BookSnapshot, Order, OrderBook, Side, Trade
from .config import (ConfigError, ScenarioConfig, from_mapping, load_config,
                     save_config, to_mapping, with_composition, with_seed)
from .fundamental import FundamentalParams, FundamentalState, advance, observe
from .kernel import Event, EventKind, SimKernel, next_wakeup_delay, seconds_to_ns
from .marketmaker import (MarketMaker, MarketMakerParams, ladder_prices,
                          reference_price)
from .metrics import BubbleMetrics, compute_metrics
from .simulation import (DEFAULT_COMPOSITIONS, RunLogs, RunResult, Simulation,
                         run_scenario, sweep_compositions, sweep_seeds)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
