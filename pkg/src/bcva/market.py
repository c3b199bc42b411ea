"""Flat-rate discounting, lognormal equity and closed-form option values.

These are the conditional-expectation building blocks for the valuation
adjustments: the equity is independent of the default times, so exposures
at a default time reduce to undiscounted Black-style call/put values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr


@dataclass(frozen=True)
class DiscountCurve:
    """Deterministic flat short rate; D(t,T) = exp(-r (T-t)) and P(t,T) = D(t,T)."""

    short_rate: float = 0.0

    def discount_factor(self, t: float, maturity: float) -> float:
        if t < 0.0 or maturity < t:
            raise ValueError(f"need 0 <= t <= T, got t={t}, T={maturity}")
        return math.exp(-self.short_rate * (maturity - t))

    def discount_factors(self, t, maturity):
        """Vectorised D(t,T) for array inputs; no argument checks."""
        return np.exp(-self.short_rate * (np.asarray(maturity) - np.asarray(t)))

    def zcb_price(self, t: float, maturity: float) -> float:
        # deterministic rates: bond price coincides with the discount factor
        return self.discount_factor(t, maturity)


@dataclass(frozen=True)
class GbmEquity:
    """Geometric Brownian motion with constant volatility, dS = r S dt + sigma S dW."""

    s0: float
    sigma: float

    def __post_init__(self):
        if self.s0 <= 0.0:
            raise ValueError("s0 must be positive")
        if self.sigma <= 0.0:
            raise ValueError("sigma must be positive")

    def terminal(self, t, z, rate: float = 0.0):
        """S_t given a standard normal draw z. Accepts scalars or arrays."""
        t = np.asarray(t, dtype=float)
        if np.any(t < 0.0):
            raise ValueError("t must be non-negative")
        drift = (rate - 0.5 * self.sigma**2) * t
        return self.s0 * np.exp(drift + self.sigma * np.sqrt(t) * np.asarray(z))

    def black_call(self, t, strike, rate: float = 0.0):
        """Undiscounted E[(S_t - K)^+]. t=0 returns the intrinsic value."""
        return self._black_value(t, strike, rate, call=True)

    def black_put(self, t, strike, rate: float = 0.0):
        """Undiscounted E[(K - S_t)^+]."""
        return self._black_value(t, strike, rate, call=False)

    def _black_value(self, t, strike, rate, call):
        t = np.asarray(t, dtype=float)
        k = np.asarray(strike, dtype=float)
        if np.any(t < 0.0):
            raise ValueError("t must be non-negative")
        if np.any(k < 0.0):
            raise ValueError("strike must be non-negative")
        fwd = self.s0 * np.exp(rate * t)
        vol = self.sigma * np.sqrt(t)
        with np.errstate(divide="ignore", invalid="ignore"):
            d1 = (np.log(fwd / k) + 0.5 * vol**2) / vol
            value = fwd * ndtr(d1) - k * ndtr(d1 - vol)
        # degenerate cases: zero strike pays the forward, t=0 pays intrinsic
        value = np.where(k == 0.0, fwd, value)
        value = np.where(vol == 0.0, np.maximum(fwd - k, 0.0), value)
        if not call:
            value = value - (fwd - k)  # put-call parity, exact by construction
        if value.ndim == 0:
            return float(value)
        return value


def forward_npv(s_t, strike: float, t, maturity: float, curve: DiscountCurve):
    """Default-free residual value of a forward at time t: S_t - P(t,T) K."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr > maturity):
        raise ValueError("t must not exceed the forward maturity")
    value = np.asarray(s_t) - curve.discount_factors(t_arr, maturity) * strike
    if value.ndim == 0:
        return float(value)
    return value
