"""Inventory-skewing ladder market maker.

The market maker tracks exponentially weighted estimates of the spread and
of traded volume, and on every refresh replaces its quotes with a ladder of
limit orders on both sides of a reference price.  The reference is the mid
shifted against its own inventory (long inventory pushes quotes down, short
pushes them up), which is the channel through which one-sided speculative
flow moves the quoted price.
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .agents import MARKET_MAKER


@dataclass(frozen=True)
class MarketMakerParams:
    levels: int = 5                 # price levels quoted per side
    ewma_lambda: float = 0.3        # weight on the newest observation
    skew_gamma: float = 0.005       # cents of reference shift per share of inventory
    refresh_gap_s: float = 30.0
    min_half_spread: int = 2        # cents
    base_volume: float = 500.0      # seeds the volume estimate, shares per refresh

    def __post_init__(self):
        if self.levels < 1:
            raise ValueError(f"levels must be >= 1, got {self.levels}")
        if not 0.0 < self.ewma_lambda <= 1.0:
            raise ValueError(f"ewma_lambda must lie in (0,1], got {self.ewma_lambda}")
        if self.skew_gamma < 0.0:
            raise ValueError(f"skew_gamma must be non-negative, got {self.skew_gamma}")
        if self.refresh_gap_s <= 0.0:
            raise ValueError(f"refresh_gap_s must be positive, got {self.refresh_gap_s}")
        if self.min_half_spread < 1:
            raise ValueError(f"min_half_spread must be >= 1, got {self.min_half_spread}")


def ewma(previous: float, observation: float, lam: float) -> float:
    return lam * observation + (1.0 - lam) * previous


def reference_price(mid: float, inventory: int, skew_gamma: float) -> float:
    """Centre of the quote ladder: the mid shifted against inventory, so a
    long position quotes lower and a short position quotes higher."""
    if mid <= 0:
        raise ValueError(f"mid must be positive, got {mid}")
    return max(1.0, mid - skew_gamma * inventory)


def ladder_prices(mid: float, inventory: int, skew_gamma: float,
                  half_spread: int, level_gap: int,
                  levels: int) -> Tuple[List[int], List[int]]:
    """Bid and ask prices around an inventory-skewed reference.

    bid_j = floor(reference - half_spread - j * level_gap)
    ask_j = ceil(reference + half_spread + j * level_gap)

    Floor on the bid side and ceil on the ask side keeps the ladder exactly
    symmetric about a half-grid mid at zero inventory and guarantees
    bid_0 < ask_0 for any half_spread >= 1.  Every price is clamped to the
    one-cent minimum, which preserves weak monotonicity in inventory.
    """
    if half_spread < 1 or level_gap < 1 or levels < 1:
        raise ValueError("half_spread, level_gap and levels must all be >= 1")
    reference = reference_price(mid, inventory, skew_gamma)
    bids = [max(1, math.floor(reference - half_spread - j * level_gap))
            for j in range(levels)]
    asks = [max(1, math.ceil(reference + half_spread + j * level_gap))
            for j in range(levels)]
    return bids, asks


@dataclass
class MarketMaker:
    """Quote state plus the running estimates.  Cash starts at zero; the
    profit-and-loss of market making is read straight off cash + inventory.
    """
    agent_id: int
    params: MarketMakerParams
    cash: int = 0
    inventory: int = 0
    ewma_spread: float = 0.0
    ewma_volume: float = 0.0
    last_cum_volume: int = 0
    open_order_ids: List[int] = field(default_factory=list)
    agent_type: str = MARKET_MAKER

    def __post_init__(self):
        if self.ewma_spread == 0.0:
            # before the first two-sided observation, quote the tightest ladder
            self.ewma_spread = 2.0 * self.params.min_half_spread
        if self.ewma_volume == 0.0:
            self.ewma_volume = self.params.base_volume

    @property
    def holdings(self) -> int:
        """Alias so fill accounting can treat every participant alike."""
        return self.inventory

    @holdings.setter
    def holdings(self, value: int) -> None:
        self.inventory = value

    def observe(self, spread: Optional[int], cum_volume: int) -> None:
        """Fold the current spread (when the book is two-sided) and the volume
        traded since the previous refresh into the running estimates.  A
        refresh interval with no trades leaves the volume estimate alone, so
        a quiet market requotes the same ladder instead of shrinking it."""
        lam = self.params.ewma_lambda
        if spread is not None:
            self.ewma_spread = ewma(self.ewma_spread, float(spread), lam)
        traded = cum_volume - self.last_cum_volume
        if traded > 0:
            self.last_cum_volume = cum_volume
            self.ewma_volume = max(1.0, ewma(self.ewma_volume, float(traded), lam))

    def quotes(self, mid: float) -> Tuple[List[Tuple[int, int]], List[Tuple[int, int]]]:
        """(price, qty) pairs for the bid and ask ladders at the given mid."""
        p = self.params
        half_spread = max(p.min_half_spread, round(self.ewma_spread / 2.0))
        level_gap = max(1, round(self.ewma_spread))
        qty = max(1, round(self.ewma_volume / p.levels))
        bids, asks = ladder_prices(mid, self.inventory, p.skew_gamma,
                                   half_spread, level_gap, p.levels)
        return [(b, qty) for b in bids], [(a, qty) for a in asks]
