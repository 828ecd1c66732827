"""Brute-force price-time matcher used as an oracle for the order book.

NaiveBook keeps every live order in one flat list and rescans it for each
fill, so its correctness can be checked by eye.  It mirrors the production
semantics: limit orders match while they cross and rest the remainder,
market orders consume what they can and discard the rest, trades print at
the resting order's price, ids must strictly increase.

run_script drives an OrderBook and a NaiveBook through the same operation
list in lockstep and returns the first discrepancy (or None), comparing
per-operation trade lists, rest/cancel outcomes and the final aggregated
book.
"""

from bubblesim.book import Order, OrderBook, Side


class NaiveBook:
    def __init__(self):
        self.orders = []  # dicts: id, agent_id, side, price, remaining, arrival
        self._arrival = 0
        self._next_trade_id = 1

    def _live(self, side):
        return [o for o in self.orders if o["side"] is side and o["remaining"] > 0]

    def _match(self, side, limit, qty, agent_id):
        trades = []
        while qty > 0:
            book = self._live(side.opposite)
            if not book:
                break
            prices = [o["price"] for o in book]
            best = min(prices) if side is Side.BUY else max(prices)
            if limit is not None:
                if side is Side.BUY and best > limit:
                    break
                if side is Side.SELL and best < limit:
                    break
            queue = sorted((o for o in book if o["price"] == best),
                           key=lambda o: o["arrival"])
            for resting in queue:
                if qty == 0:
                    break
                take = min(qty, resting["remaining"])
                resting["remaining"] -= take
                qty -= take
                buyer = agent_id if side is Side.BUY else resting["agent_id"]
                seller = resting["agent_id"] if side is Side.BUY else agent_id
                trades.append((self._next_trade_id, best, take, buyer, seller, side))
                self._next_trade_id += 1
        return trades, qty

    def submit_limit(self, order_id, agent_id, side, price, qty):
        trades, remaining = self._match(side, price, qty, agent_id)
        if remaining > 0:
            self.orders.append({"id": order_id, "agent_id": agent_id, "side": side,
                                "price": price, "remaining": remaining,
                                "arrival": self._arrival})
        self._arrival += 1
        return trades, remaining > 0

    def submit_market(self, side, qty, agent_id):
        trades, _ = self._match(side, None, qty, agent_id)
        self._arrival += 1
        return trades

    def cancel(self, order_id):
        for i, order in enumerate(self.orders):
            if order["id"] == order_id:
                if order["remaining"] == 0:
                    return False
                del self.orders[i]
                return True
        return False

    def levels(self, side):
        """Aggregated (price, qty) list, best price first."""
        totals = {}
        for o in self._live(side):
            totals[o["price"]] = totals.get(o["price"], 0) + o["remaining"]
        return sorted(totals.items(), reverse=(side is Side.BUY))


def random_script(rng, max_ops):
    """Operation list with symbolic cancel targets (index into submitted ids)."""
    ops = []
    n_limits = 0
    for _ in range(int(rng.integers(1, max_ops + 1))):
        roll = rng.random()
        side = Side.BUY if rng.random() < 0.5 else Side.SELL
        if roll < 0.55 or n_limits == 0:
            price = int(rng.integers(9950, 10051))
            qty = int(rng.integers(1, 201))
            ops.append(("limit", side, price, qty))
            n_limits += 1
        elif roll < 0.75:
            ops.append(("market", side, int(rng.integers(1, 301))))
        elif roll < 0.95:
            ops.append(("cancel", int(rng.integers(0, n_limits))))
        else:
            ops.append(("cancel", None))  # id no book has seen
    return ops


def _trade_key(trade):
    return (trade.trade_id, trade.price, trade.qty, trade.buyer_id,
            trade.seller_id, trade.aggressor_side)


def run_script(ops):
    """Replay ops on both books; returns None or a description of the first
    mismatch.  Each op uses its index as the submitting agent id and time."""
    prod = OrderBook()
    naive = NaiveBook()
    submitted = []
    for i, op in enumerate(ops):
        if op[0] == "limit":
            _, side, price, qty = op
            oid = prod.next_order_id()
            p_trades, p_resting = prod.submit_limit(Order(oid, i, side, price, qty, i))
            n_trades, n_resting = naive.submit_limit(oid, i, side, price, qty)
            submitted.append(oid)
            if [_trade_key(t) for t in p_trades] != n_trades:
                return f"op {i} limit: trades differ"
            if (p_resting is not None) != n_resting:
                return f"op {i} limit: rest outcome differs"
        elif op[0] == "market":
            _, side, qty = op
            p_trades = prod.submit_market(side, qty, i, i)
            n_trades = naive.submit_market(side, qty, i)
            if [_trade_key(t) for t in p_trades] != n_trades:
                return f"op {i} market: trades differ"
        else:
            _, target = op
            oid = submitted[target] if target is not None else 10 ** 9
            if prod.cancel(oid) != naive.cancel(oid):
                return f"op {i} cancel: outcome differs"
    snap = prod.snapshot(depth=10 ** 9, at=len(ops), fallback=10_000)
    if snap.bids != naive.levels(Side.BUY):
        return "final bid ladders differ"
    if snap.asks != naive.levels(Side.SELL):
        return "final ask ladders differ"
    return None
