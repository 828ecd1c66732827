"""Limit order book for a single asset with price-time priority matching.

Prices are integer ticks (1 tick = 1 cent) and quantities integer shares,
so trade accounting is exact.  Supported operations: limit orders (which
match immediately as far as their limit allows and rest the remainder),
market orders (fire-and-forget, unfilled remainder discarded), cancels,
mid-price queries and depth snapshots.
"""

import heapq
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .kernel import SimTime


class Side(Enum):
    BUY = "buy"
    SELL = "sell"

    @property
    def opposite(self) -> "Side":
        return Side.SELL if self is Side.BUY else Side.BUY


@dataclass
class Order:
    id: int
    agent_id: int
    side: Side
    price: Optional[int]  # limit price in ticks; None for market orders
    qty: int
    submitted_at: SimTime = 0
    remaining: int = field(init=False)

    def __post_init__(self):
        if self.qty <= 0:
            raise ValueError(f"order qty must be positive, got {self.qty}")
        if self.price is not None and self.price < 1:
            raise ValueError(f"limit price must be >= 1 tick, got {self.price}")
        self.remaining = self.qty


@dataclass(frozen=True)
class Trade:
    trade_id: int
    price: int
    qty: int
    buyer_id: int
    seller_id: int
    at: SimTime
    aggressor_side: Side


@dataclass(frozen=True)
class BookSnapshot:
    at: SimTime
    bids: list  # [(price, total qty)] best first (descending)
    asks: list  # [(price, total qty)] best first (ascending)
    mid: float


class OrderBook:
    """Price levels are FIFO queues; level lookup uses lazily-cleaned price heaps."""

    def __init__(self):
        # price -> deque[Order] with live remainder; parallel qty aggregate per level
        self._bid_levels: dict[int, deque] = {}
        self._ask_levels: dict[int, deque] = {}
        self._bid_qty: dict[int, int] = {}
        self._ask_qty: dict[int, int] = {}
        self._bid_heap: list[int] = []  # negated prices
        self._ask_heap: list[int] = []
        self._resting: dict[int, Order] = {}
        self._max_order_id = 0
        self._next_trade_id = 1
        self.last_trade_price: Optional[int] = None
        self.cum_volume = 0  # total shares traded over the run

    # ---- id management -------------------------------------------------

    def next_order_id(self) -> int:
        return self._max_order_id + 1

    def _claim_id(self, order_id: int) -> None:
        # ids must be strictly increasing, which guarantees uniqueness for the run
        if order_id <= self._max_order_id:
            raise ValueError(f"order id {order_id} rejected: already used (or not increasing)")
        self._max_order_id = order_id

    # ---- top of book ---------------------------------------------------

    def best_bid(self) -> Optional[int]:
        heap, qty = self._bid_heap, self._bid_qty
        while heap:
            price = -heap[0]
            if qty.get(price, 0) > 0:
                return price
            heapq.heappop(heap)
        return None

    def best_ask(self) -> Optional[int]:
        heap, qty = self._ask_heap, self._ask_qty
        while heap:
            price = heap[0]
            if qty.get(price, 0) > 0:
                return price
            heapq.heappop(heap)
        return None

    def mid_price(self, fallback: int) -> float:
        """Mid of the touch; falls back to the last trade price, then to `fallback`."""
        bid, ask = self.best_bid(), self.best_ask()
        if bid is not None and ask is not None:
            return (bid + ask) / 2
        if self.last_trade_price is not None:
            return float(self.last_trade_price)
        return float(fallback)

    def spread(self) -> Optional[int]:
        bid, ask = self.best_bid(), self.best_ask()
        if bid is None or ask is None:
            return None
        return ask - bid

    # ---- order entry ---------------------------------------------------

    def submit_limit(self, order: Order) -> tuple[list[Trade], Optional[Order]]:
        """Match as far as the limit allows, rest the remainder.

        Returns (trades, resting order or None).  Trades print at the
        resting order's price; price priority first, then arrival order.
        """
        if order.price is None:
            raise ValueError("submit_limit requires a limit price")
        self._claim_id(order.id)
        trades = self._match(order, limit=order.price)
        resting = None
        if order.remaining > 0:
            self._rest(order)
            resting = order
        return trades, resting

    def submit_market(self, side: Side, qty: int, agent_id: int,
                      at: SimTime) -> list[Trade]:
        """Consume opposite-side liquidity best-price-first; remainder is discarded."""
        order = Order(self.next_order_id(), agent_id, side, None, qty, at)
        self._claim_id(order.id)
        return self._match(order, limit=None)

    def cancel(self, order_id: int) -> bool:
        """Remove a resting order.  False if unknown, filled, or already cancelled."""
        order = self._resting.pop(order_id, None)
        if order is None:
            return False
        levels, qtys = self._side_tables(order.side)
        level = levels[order.price]
        level.remove(order)
        qtys[order.price] -= order.remaining
        if not level:
            del levels[order.price]
            del qtys[order.price]
        return True

    # ---- snapshots -----------------------------------------------------

    def snapshot(self, depth: int, at: SimTime, fallback: int) -> BookSnapshot:
        bids = sorted(((p, q) for p, q in self._bid_qty.items() if q > 0), reverse=True)
        asks = sorted((p, q) for p, q in self._ask_qty.items() if q > 0)
        return BookSnapshot(at, bids[:depth], asks[:depth], self.mid_price(fallback))

    def depth_at(self, side: Side, price: int) -> int:
        qtys = self._bid_qty if side is Side.BUY else self._ask_qty
        return qtys.get(price, 0)

    # ---- internals -----------------------------------------------------

    def _side_tables(self, side: Side):
        if side is Side.BUY:
            return self._bid_levels, self._bid_qty
        return self._ask_levels, self._ask_qty

    def _rest(self, order: Order) -> None:
        levels, qtys = self._side_tables(order.side)
        level = levels.get(order.price)
        if level is None:
            levels[order.price] = deque([order])
            qtys[order.price] = order.remaining
            if order.side is Side.BUY:
                heapq.heappush(self._bid_heap, -order.price)
            else:
                heapq.heappush(self._ask_heap, order.price)
        else:
            level.append(order)
            qtys[order.price] += order.remaining
        self._resting[order.id] = order

    def _match(self, incoming: Order, limit: Optional[int]) -> list[Trade]:
        trades: list[Trade] = []
        buy = incoming.side is Side.BUY
        levels, qtys = self._side_tables(incoming.side.opposite)
        while incoming.remaining > 0:
            best = self.best_ask() if buy else self.best_bid()
            if best is None:
                break
            if limit is not None and (best > limit if buy else best < limit):
                break
            level = levels[best]
            while incoming.remaining > 0 and level:
                resting = level[0]
                qty = min(incoming.remaining, resting.remaining)
                incoming.remaining -= qty
                resting.remaining -= qty
                qtys[best] -= qty
                buyer = incoming.agent_id if buy else resting.agent_id
                seller = resting.agent_id if buy else incoming.agent_id
                trades.append(Trade(self._next_trade_id, best, qty, buyer, seller,
                                    incoming.submitted_at, incoming.side))
                self._next_trade_id += 1
                self.last_trade_price = best
                self.cum_volume += qty
                if resting.remaining == 0:
                    level.popleft()
                    del self._resting[resting.id]
            if not level:
                del levels[best]
                del qtys[best]
        return trades
