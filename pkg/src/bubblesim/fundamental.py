"""True value of the asset: a mean-reverting diffusion with occasional jumps.

The value follows an Ornstein-Uhlenbeck process sampled with its exact
transition (no Euler bias, so agents can observe it at irregular times),
plus Poisson-arriving "megashocks" drawn from an equal-weight two-component
normal mixture with a common absolute mean -- i.e. a jump of size
Normal(shock_mean, shock_sd) that is positive or negative with equal
probability.  Agents never see the true value directly; they receive
noisy observations from their own random streams.
"""

import math
from dataclasses import dataclass

import numpy as np

from .kernel import NS_PER_SEC, SimTime


@dataclass(frozen=True)
class FundamentalParams:
    mean: float = 100_000.0        # long-run level, cents
    kappa: float = 1.67e-4         # mean-reversion rate, 1/s
    sigma: float = 50.0            # diffusion volatility, cents/sqrt(s)
    shock_rate: float = 1.0 / 3600.0  # megashock arrivals, 1/s
    shock_mean: float = 500.0      # common absolute jump mean, cents
    shock_sd: float = 100.0        # jump spread, cents
    obs_sd: float = 100.0          # per-observation noise, cents

    def __post_init__(self):
        if self.kappa <= 0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")
        if self.sigma < 0 or self.shock_sd < 0 or self.obs_sd < 0:
            raise ValueError("volatilities must be non-negative")
        if self.shock_rate < 0:
            raise ValueError(f"shock_rate must be non-negative, got {self.shock_rate}")
        if self.shock_mean <= 0:
            raise ValueError(f"shock_mean must be positive, got {self.shock_mean}")

    def stationary_variance(self) -> float:
        return self.sigma ** 2 / (2.0 * self.kappa)


@dataclass
class FundamentalState:
    value: float  # cents, floored at 1 tick
    at: SimTime = 0


def advance(state: FundamentalState, to: SimTime, params: FundamentalParams,
            rng: np.random.Generator) -> FundamentalState:
    """Evolve the value to time `to` with the exact transition over the gap.

    v' = mean + (v - mean) * e^(-kappa*dt)
         + sigma * sqrt((1 - e^(-2*kappa*dt)) / (2*kappa)) * Z
    followed by K ~ Poisson(shock_rate*dt) jumps of +/-Normal(shock_mean,
    shock_sd), then floored at 1 tick.  Splitting the gap into sub-steps
    yields the same distribution, so evaluation can be lazy.
    """
    if to < state.at:
        raise ValueError(f"cannot advance fundamental backwards: {state.at} -> {to}")
    if to == state.at:
        return state
    dt = (to - state.at) / NS_PER_SEC
    decay = math.exp(-params.kappa * dt)
    value = params.mean + (state.value - params.mean) * decay
    if params.sigma > 0:
        cond_sd = params.sigma * math.sqrt((1.0 - decay * decay) / (2.0 * params.kappa))
        value += cond_sd * rng.standard_normal()
    if params.shock_rate > 0:
        for _ in range(rng.poisson(params.shock_rate * dt)):
            sign = 1.0 if rng.random() < 0.5 else -1.0
            value += sign * rng.normal(params.shock_mean, params.shock_sd)
    state.value = max(1.0, value)
    state.at = to
    return state


def observe(state: FundamentalState, params: FundamentalParams,
            agent_rng: np.random.Generator) -> float:
    """A noisy reading of the current value, noise drawn from the agent's stream."""
    if params.obs_sd == 0:
        return state.value
    return state.value + agent_rng.normal(0.0, params.obs_sd)
