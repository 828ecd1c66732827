"""Acceptance suite: eleven end-to-end checks of the simulator's contract.

Each test prints one "[criterion NN] PASS/FAIL ..." line (kept visible even
under pytest's output capture) and then asserts, so a plain `pytest -v`
shows the verdict per criterion.  Expected values come from independent
oracles: closed-form transition moments, a brute-force reference matcher,
hand-enumerated decision tables and direct re-enumeration, never from the
code under test.

Criteria 5-7 share one module-scoped fixture of 40 full-horizon runs
(20 seeds x {baseline, speculator-heavy}); expect the module to take a few
minutes of CPU.
"""

import dataclasses
import math

import numpy as np
import pytest

from bubblesim.agents import STARTING_CASH, SpeculativeAgent, max_log_return
from bubblesim.book import Side
from bubblesim.config import ScenarioConfig, with_composition, with_seed
from bubblesim.fundamental import FundamentalParams, FundamentalState, advance
from bubblesim.io import write_run_artifacts
from bubblesim.kernel import NS_PER_SEC
from bubblesim.marketmaker import MarketMaker, MarketMakerParams
from bubblesim.rng import agent_stream, fundamental_stream
from bubblesim.simulation import (DEFAULT_COMPOSITIONS, run_scenario,
                                  sweep_compositions)

from reference_matcher import random_script, run_script

SEEDS = tuple(range(2023, 2043))  # 20 seeds
BASELINE = (500, 0)
BUBBLE = (100, 400)


@pytest.fixture
def report(capsys):
    def _report(number, passed, detail):
        verdict = "PASS" if passed else "FAIL"
        with capsys.disabled():
            print(f"[criterion {number:02d}] {verdict} {detail}")
        assert passed, f"criterion {number}: {detail}"
    return _report


@pytest.fixture(scope="module")
def seed_sweep():
    """Metrics for the baseline and speculator-heavy mixes at each seed."""
    out = {}
    for seed in SEEDS:
        cfg = with_seed(ScenarioConfig(), seed)
        base = run_scenario(with_composition(cfg, *BASELINE)).metrics
        bubble = run_scenario(with_composition(cfg, *BUBBLE)).metrics
        out[seed] = (base, bubble)
    return out


def test_criterion_01_determinism(tmp_path, report):
    cfg = with_composition(
        dataclasses.replace(ScenarioConfig(), horizon_s=3600.0), *BUBBLE)
    first = write_run_artifacts(run_scenario(cfg), tmp_path / "a")
    second = write_run_artifacts(run_scenario(cfg), tmp_path / "b")
    same = {name: open(first[name], "rb").read() == open(second[name], "rb").read()
            for name in ("trades", "l1", "mtm")}
    report(1, all(same.values()),
           "identical config and seed give byte-identical trades/L1/MtM logs "
           f"({sum(same.values())}/3 files equal)")


def test_criterion_02_matching_engine_oracle(report):
    rng = np.random.default_rng(20_230_202)
    failures = 0
    for _ in range(1_000):
        if run_script(random_script(rng, max_ops=500)) is not None:
            failures += 1
    report(2, failures == 0,
           "1000 random scripts of <=500 ops match the brute-force matcher "
           f"exactly ({1_000 - failures}/1000)")


def test_criterion_03_conservation(report):
    ok = True
    for mix in (BASELINE, BUBBLE):
        cfg = with_composition(
            dataclasses.replace(ScenarioConfig(), horizon_s=3600.0), *mix)
        result = run_scenario(cfg)
        n_traders = mix[0] + mix[1]
        expected_cash = n_traders * STARTING_CASH  # market maker starts at zero
        for at in {row[0] for row in result.logs.mtm}:
            rows = [row for row in result.logs.mtm if row[0] == at]
            ok &= sum(row[3] for row in rows) == expected_cash
            ok &= sum(row[4] for row in rows) == 0
        final_cash = sum(a.cash for a in result.agents) + result.market_maker.cash
        final_shares = (sum(a.holdings for a in result.agents)
                        + result.market_maker.inventory)
        ok &= final_cash == expected_cash and final_shares == 0
    report(3, ok, "cash and share totals are constant (integer-exact) at every "
                  "sample of a baseline and a speculator-heavy run")


def test_criterion_04_ou_transition(report):
    params = FundamentalParams(shock_rate=0.0)  # sigma-only path
    state = FundamentalState(value=params.mean)
    rng = fundamental_stream(2023)
    dt_s = 60.0
    dt_ns = int(dt_s) * NS_PER_SEC
    n = 1_000_000
    values = np.empty(n + 1)
    values[0] = state.value
    at = 0
    for i in range(1, n + 1):
        at += dt_ns
        advance(state, at, params, rng)
        values[i] = state.value
    slope = np.polyfit(values[:-1], values[1:], 1)[0]
    kappa_hat = -math.log(slope) / dt_s
    kappa_err = abs(kappa_hat - params.kappa) / params.kappa
    var = float(np.var(values[10_000:]))
    var_err = abs(var - params.stationary_variance()) / params.stationary_variance()
    report(4, kappa_err < 0.15 and var_err < 0.10,
           f"1e6-step sigma-only path: kappa estimate off by {kappa_err:.1%} "
           f"(<15%), stationary variance off by {var_err:.1%} (<10%)")


def test_criterion_05_baseline_tracks_the_fundamental(seed_sweep, report):
    base_2023, bubble_2023 = seed_sweep[2023]
    mean_ok = base_2023.mean_abs_rel_deviation < bubble_2023.mean_abs_rel_deviation
    hits = sum(1 for base, bubble in seed_sweep.values()
               if base.max_abs_rel_deviation < bubble.max_abs_rel_deviation / 3)
    report(5, mean_ok and hits >= 16,
           f"baseline time-averaged deviation below the speculative run's at "
           f"seed 2023 ({base_2023.mean_abs_rel_deviation:.4f} < "
           f"{bubble_2023.mean_abs_rel_deviation:.4f}) and max deviation under "
           f"a third of it on {hits}/20 seeds (need >=16)")


def test_criterion_06_bubbles_emerge_with_speculators(seed_sweep, report):
    dev_hits = sum(1 for base, bubble in seed_sweep.values()
                   if bubble.max_abs_rel_deviation >= 3 * base.max_abs_rel_deviation)
    vol_hits = sum(1 for base, bubble in seed_sweep.values()
                   if bubble.realized_vol > base.realized_vol)
    report(6, dev_hits >= 16 and vol_hits >= 16,
           f"speculator-heavy mix triples the max deviation on {dev_hits}/20 "
           f"seeds and raises realized volatility on {vol_hits}/20 (need >=16)")


def test_criterion_07_speculators_mostly_lose(seed_sweep, report):
    hits = 0
    for _base, bubble in seed_sweep.values():
        median_ok = bubble.spec_final_mtm_median < STARTING_CASH
        frac = bubble.spec_fraction_profitable
        if median_ok and 0.0 < frac < 0.5:
            hits += 1
    report(7, hits >= 16,
           f"median speculator ends below starting wealth with a small "
           f"profitable minority on {hits}/20 seeds (need >=16)")


def test_criterion_08_inventory_skew_direction(report):
    rng = np.random.default_rng(20_230_208)
    monotone = True
    symmetric = True
    for _ in range(400):
        params = MarketMakerParams(
            levels=int(rng.integers(1, 9)),
            skew_gamma=float(rng.choice([0.0, 0.001, 0.005, 0.01, 0.1])),
            min_half_spread=int(rng.integers(1, 5)))
        mm = MarketMaker(agent_id=0, params=params)
        mm.ewma_spread = float(rng.uniform(1.0, 40.0))
        mm.ewma_volume = float(rng.uniform(1.0, 5_000.0))
        mid = float(rng.integers(5_000, 200_001)) + float(rng.choice([0.0, 0.5]))

        low, high = sorted(int(v) for v in rng.integers(-10 ** 5, 10 ** 5, 2))
        mm.inventory = low
        bids_low, asks_low = mm.quotes(mid)
        mm.inventory = high
        bids_high, asks_high = mm.quotes(mid)
        monotone &= all(b[0] <= a[0] for a, b in zip(bids_low, bids_high))
        monotone &= all(b[0] <= a[0] for a, b in zip(asks_low, asks_high))

        mm.inventory = 0
        bids, asks = mm.quotes(mid)
        symmetric &= all(ask[0] - mid == mid - bid[0]
                         for bid, ask in zip(bids, asks))
    report(8, monotone and symmetric,
           "ladder prices weakly decrease in inventory level-by-level and are "
           "exactly symmetric about the mid at zero inventory (400 random states)")


def test_criterion_09_speculator_decision_grid(report):
    # 2x2x2 hand-derived truth table: {holdings 0/positive} x {exit wealth
    # condition true/false} x {max-return signal true/false}.  Sell wins,
    # buy only without an exit, otherwise nothing.
    # Exit arm: stop-loss (wealth < 0.5 * w0 = 500k at mid 100).
    # Signal arm: prior mid 90 gives ln(100/90) ~ 0.105 >= trigger 0.05.
    cases = [
        # (holdings, exit_true, signal_true, expected action)
        (1_000, True, True, "sell"),
        (1_000, True, False, "sell"),
        (1_000, False, True, "buy"),
        (1_000, False, False, None),
        (0, True, True, "buy"),     # nothing to sell, never short
        (0, True, False, None),
        (0, False, True, "buy"),
        (0, False, False, None),
    ]
    mismatches = []
    for holdings, exit_true, signal_true, expected in cases:
        agent = SpeculativeAgent(
            agent_id=0, take_profit=1.5, stop_loss=0.5, buy_trigger=0.05,
            window=4, mean_gap_s=60.0, size_mu=math.log(100.0), size_sigma=0.7,
            leverage_cap=2.0, cash=100_000 if exit_true else 600_000,
            holdings=holdings, w0=1_000_000, w_lt=1_000_000.0,
            mid_history=[90.0 if signal_true else 100.0])
        intent = agent.decide(100.0, agent_stream(9, 0))
        if expected == "sell":
            got_expected = (intent is not None and intent.side is Side.SELL
                            and intent.qty == holdings and intent.price is None)
        elif expected == "buy":
            got_expected = (intent is not None and intent.side is Side.BUY
                            and intent.qty >= 1 and intent.price is None)
        else:
            got_expected = intent is None
        if not got_expected:
            mismatches.append((holdings, exit_true, signal_true))
    report(9, not mismatches,
           f"wakeup decision matches the sell-first/buy-else truth table on "
           f"all {len(cases)} cells" + (f"; mismatches: {mismatches}" if mismatches else ""))


def test_criterion_10_max_return_oracle(report):
    rng = np.random.default_rng(20_230_210)
    worst = 0.0
    agree = True
    for _ in range(10_000):
        n = int(rng.integers(1, 40))
        mids = np.exp(rng.normal(math.log(100.0), 0.4, size=n)).tolist()
        got = max_log_return(mids)
        expected = (max(math.log(mids[i + 1] / mids[i]) for i in range(n - 1))
                    if n >= 2 else None)
        if (got is None) != (expected is None):
            agree = False
        elif got is not None:
            scale = max(abs(expected), 1e-300)
            worst = max(worst, abs(got - expected) / scale)
    report(10, agree and worst <= 1e-12,
           f"max log return equals brute-force enumeration over 1e4 histories "
           f"(worst relative error {worst:.2e} <= 1e-12)")


def test_criterion_11_deviation_grows_with_speculator_share(report):
    cfg = with_seed(ScenarioConfig(), 2023)
    table = sweep_compositions(cfg, DEFAULT_COMPOSITIONS)
    errors = [row["error"] for row in table if row["error"]]
    devs = [row["max_abs_rel_deviation"] for row in table]
    rises = sum(1 for a, b in zip(devs, devs[1:]) if b >= a)
    detail = ", ".join(f"{d:.3f}" for d in devs)
    report(11, not errors and rises >= 4,
           f"max deviation weakly increases with speculator share in {rises}/5 "
           f"adjacent steps (need >=4): [{detail}]")
