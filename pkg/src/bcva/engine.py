"""Valuation adjustments for equity forwards and zero-coupon bonds.

Two interchangeable routes are provided for every forward quantity:

* "mc" — simulate joint default times and apply the conditioned payoff
  (equity is independent of the defaults, so the exposure at a default
  time collapses to a closed-form call/put value);
* "semi_analytic" — 1-d adaptive quadrature of the relevant default-time
  densities against the same closed-form exposures.

The simplified bilateral price is the unilateral composition
V0 + UDVA - UCVA and carries no default-dependence; the full bilateral
price gates each adjustment leg on who defaults first. Their difference
is estimated directly on shared default-time draws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .default_model import GumbelBivariateExponential
from .market import DiscountCurve, GbmEquity
from .mc import McConfig, McEstimate, estimate

SEMI_ANALYTIC = "semi_analytic"
# the unilateral adjustments only need marginal quadrature; accept both names
_ANALYTIC_METHODS = (SEMI_ANALYTIC, "quadrature")


@dataclass(frozen=True)
class CreditParams:
    """Loss-given-default of each party (1 - recovery)."""

    lgd_a: float = 1.0
    lgd_b: float = 1.0

    def __post_init__(self):
        for name, v in (("lgd_a", self.lgd_a), ("lgd_b", self.lgd_b)):
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")


@dataclass(frozen=True)
class EquityForward:
    """Forward on the equity with payoff position * (S_T - K) to the holder."""

    strike: float
    maturity: float
    position: int = 1  # +1 long (receive S_T - K), -1 short

    def __post_init__(self):
        if self.strike < 0.0:
            raise ValueError("strike must be non-negative")
        if self.maturity <= 0.0:
            raise ValueError("maturity must be positive")
        if self.position not in (1, -1):
            raise ValueError("position must be +1 or -1")


@dataclass(frozen=True)
class ZeroCouponBond:
    """Unit notional, held by party A (the lender)."""

    maturity: float

    def __post_init__(self):
        if self.maturity <= 0.0:
            raise ValueError("maturity must be positive")


@dataclass(frozen=True)
class Market:
    curve: DiscountCurve
    equity: GbmEquity


@dataclass
class BcvaReport:
    risk_free_value: float
    ucva_a: float
    udva_a: float
    bilateral_cva: float
    bilateral_dva: float
    full_price: float
    simplified_price: float
    difference: float
    std_errors: dict = field(default_factory=dict)
    substitution_closeout_price: float | None = None


# ----------------------------------------------------------------------
# exposure at a default time (tower property: equity independent of defaults)


def _call_exposure(fwd: EquityForward, market: Market, t):
    """E[(position (S_t - P(t,T) K))^+], A's positive exposure at time t."""
    r = market.curve.short_rate
    strike = fwd.strike * market.curve.discount_factors(t, fwd.maturity)
    if fwd.position == 1:
        return market.equity.black_call(t, strike, rate=r)
    return market.equity.black_put(t, strike, rate=r)


def _put_exposure(fwd: EquityForward, market: Market, t):
    """E[(-position (S_t - P(t,T) K))^+], A's negative exposure at time t."""
    r = market.curve.short_rate
    strike = fwd.strike * market.curve.discount_factors(t, fwd.maturity)
    if fwd.position == 1:
        return market.equity.black_put(t, strike, rate=r)
    return market.equity.black_call(t, strike, rate=r)


def risk_free_forward_value(fwd: EquityForward, market: Market) -> float:
    value = market.equity.s0 - market.curve.zcb_price(0.0, fwd.maturity) * fwd.strike
    return fwd.position * value


def _quad(f, a, b):
    value, _ = integrate.quad(f, a, b, epsabs=1e-13, epsrel=1e-11, limit=200)
    return value


# ----------------------------------------------------------------------
# unilateral adjustments


def ucva_forward(
    fwd: EquityForward,
    credit: CreditParams,
    model: GumbelBivariateExponential,
    market: Market,
    method: McConfig | str = SEMI_ANALYTIC,
    estimator: str = "conditional",
    threads: int = 1,
) -> McEstimate:
    """UCVA_A: expected discounted loss on A's positive exposure at tau_B <= T."""
    T = fwd.maturity
    lam = model.lambda_b
    if isinstance(method, McConfig):
        sampler = _unilateral_sampler(fwd, market, model, which="b", estimator=estimator,
                                      antithetic=method.antithetic)
        est = estimate(sampler, method, threads=threads)
        return McEstimate(credit.lgd_b * est.mean, credit.lgd_b * est.std_error, est.n)
    _require_analytic(method)
    value = credit.lgd_b * _quad(
        lambda t: lam * math.exp(-lam * t)
        * market.curve.discount_factor(0.0, t)
        * _call_exposure(fwd, market, t),
        0.0, T,
    )
    return McEstimate(value, 0.0, 0)


def udva_forward(
    fwd: EquityForward,
    credit: CreditParams,
    model: GumbelBivariateExponential,
    market: Market,
    method: McConfig | str = SEMI_ANALYTIC,
    estimator: str = "conditional",
    threads: int = 1,
) -> McEstimate:
    """UDVA_A: the mirror-image gain on A's own default, a put-type exposure.

    Equals the UCVA that party B would compute with the parties swapped.
    """
    T = fwd.maturity
    lam = model.lambda_a
    if isinstance(method, McConfig):
        sampler = _unilateral_sampler(fwd, market, model, which="a", estimator=estimator,
                                      antithetic=method.antithetic)
        est = estimate(sampler, method, threads=threads)
        return McEstimate(credit.lgd_a * est.mean, credit.lgd_a * est.std_error, est.n)
    _require_analytic(method)
    value = credit.lgd_a * _quad(
        lambda t: lam * math.exp(-lam * t)
        * market.curve.discount_factor(0.0, t)
        * _put_exposure(fwd, market, t),
        0.0, T,
    )
    return McEstimate(value, 0.0, 0)


def _require_analytic(method):
    if method not in _ANALYTIC_METHODS:
        raise ValueError(f"unknown method {method!r}")


def _unilateral_sampler(fwd, market, model, which, estimator, antithetic):
    T = fwd.maturity

    def sampler(rng, n):
        tau_a, tau_b = model.sample_pairs(rng, n, antithetic=antithetic)
        tau = tau_a if which == "a" else tau_b
        hit = tau <= T
        t = np.where(hit, tau, 0.0)
        expo = _exposure_at(fwd, market, t, rng, estimator, put=(which == "a"))
        return np.where(hit, market.curve.discount_factors(0.0, t) * expo, 0.0)

    return sampler


def _exposure_at(fwd, market, t, rng, estimator, put):
    """Exposure value at default times t, conditioned or pathwise."""
    if estimator == "conditional":
        return _put_exposure(fwd, market, t) if put else _call_exposure(fwd, market, t)
    if estimator == "pathwise":
        z = rng.standard_normal(np.shape(t))
        s = market.equity.terminal(t, z, rate=market.curve.short_rate)
        residual = fwd.position * (
            s - market.curve.discount_factors(t, fwd.maturity) * fwd.strike
        )
        return np.maximum(-residual, 0.0) if put else np.maximum(residual, 0.0)
    raise ValueError(f"unknown estimator {estimator!r}")


# ----------------------------------------------------------------------
# bilateral adjustments (first-to-default)


def bilateral_terms_forward(
    fwd: EquityForward,
    credit: CreditParams,
    model: GumbelBivariateExponential,
    market: Market,
    method: McConfig | str = SEMI_ANALYTIC,
    estimator: str = "conditional",
    threads: int = 1,
) -> tuple[McEstimate, McEstimate]:
    """First-to-default (bilateral_cva, bilateral_dva) as seen by A."""
    T = fwd.maturity
    if isinstance(method, McConfig):
        def cva_sampler(rng, n):
            tau_a, tau_b = model.sample_pairs(rng, n, antithetic=method.antithetic)
            hit = (tau_b < tau_a) & (tau_b <= T)
            t = np.where(hit, tau_b, 0.0)
            expo = _exposure_at(fwd, market, t, rng, estimator, put=False)
            return np.where(hit, market.curve.discount_factors(0.0, t) * expo, 0.0)

        def dva_sampler(rng, n):
            tau_a, tau_b = model.sample_pairs(rng, n, antithetic=method.antithetic)
            hit = (tau_a < tau_b) & (tau_a <= T)
            t = np.where(hit, tau_a, 0.0)
            expo = _exposure_at(fwd, market, t, rng, estimator, put=True)
            return np.where(hit, market.curve.discount_factors(0.0, t) * expo, 0.0)

        cva = estimate(cva_sampler, method, threads=threads)
        dva = estimate(dva_sampler, method, threads=threads)
        return (
            McEstimate(credit.lgd_b * cva.mean, credit.lgd_b * cva.std_error, cva.n),
            McEstimate(credit.lgd_a * dva.mean, credit.lgd_a * dva.std_error, dva.n),
        )
    _require_analytic(method)
    # density of {tau_B in dt, tau_A > t} is -dG/dx2(t, t); mirror for A
    cva = credit.lgd_b * _quad(
        lambda t: -model.survival_partial_x2(t, t)
        * market.curve.discount_factor(0.0, t)
        * _call_exposure(fwd, market, t),
        0.0, T,
    )
    dva = credit.lgd_a * _quad(
        lambda t: -model.survival_partial_x1(t, t)
        * market.curve.discount_factor(0.0, t)
        * _put_exposure(fwd, market, t),
        0.0, T,
    )
    return McEstimate(cva, 0.0, 0), McEstimate(dva, 0.0, 0)


def difference_forward(
    fwd: EquityForward,
    credit: CreditParams,
    model: GumbelBivariateExponential,
    market: Market,
    method: McConfig | str = SEMI_ANALYTIC,
    estimator: str = "conditional",
    threads: int = 1,
) -> McEstimate:
    """D^AB = full bilateral price minus simplified price, estimated directly.

    D^AB = A1 - A2 with
      A1 = lgd_b * E[1{tau_A < tau_B <= T} D(0,tau_B) (S - P K)^+ at tau_B]
      A2 = lgd_a * E[1{tau_B < tau_A <= T} D(0,tau_A) (P K - S)^+ at tau_A].
    Under MC both terms share the same default-time draws, so the reported
    standard error is that of the difference itself.
    """
    T = fwd.maturity
    if isinstance(method, McConfig):
        def sampler(rng, n):
            tau_a, tau_b = model.sample_pairs(rng, n, antithetic=method.antithetic)
            hit1 = (tau_a < tau_b) & (tau_b <= T)
            hit2 = (tau_b < tau_a) & (tau_a <= T)
            t1 = np.where(hit1, tau_b, 0.0)
            t2 = np.where(hit2, tau_a, 0.0)
            a1 = np.where(
                hit1,
                market.curve.discount_factors(0.0, t1)
                * _exposure_at(fwd, market, t1, rng, estimator, put=False),
                0.0,
            )
            a2 = np.where(
                hit2,
                market.curve.discount_factors(0.0, t2)
                * _exposure_at(fwd, market, t2, rng, estimator, put=True),
                0.0,
            )
            return credit.lgd_b * a1 - credit.lgd_a * a2

        return estimate(sampler, method, threads=threads)
    _require_analytic(method)
    la, lb = model.lambda_a, model.lambda_b

    def integrand(t):
        df = market.curve.discount_factor(0.0, t)
        # density of {tau_B in dt, tau_A < t} = marginal minus survivor part
        dens_b_second = lb * math.exp(-lb * t) + model.survival_partial_x2(t, t)
        dens_a_second = la * math.exp(-la * t) + model.survival_partial_x1(t, t)
        a1 = credit.lgd_b * dens_b_second * _call_exposure(fwd, market, t)
        a2 = credit.lgd_a * dens_a_second * _put_exposure(fwd, market, t)
        return df * (a1 - a2)

    return McEstimate(_quad(integrand, 0.0, T), 0.0, 0)


def bcva_simplified_forward(
    fwd: EquityForward,
    credit: CreditParams,
    model: GumbelBivariateExponential,
    market: Market,
    method: McConfig | str = SEMI_ANALYTIC,
    estimator: str = "conditional",
    threads: int = 1,
) -> McEstimate:
    """Simplified bilateral price V0 + UDVA_A - UCVA_A.

    Ignores the first-to-default check, so it is independent of the
    dependence parameter; the same value serves risk-free and substitution
    closeout conventions.
    """
    v0 = risk_free_forward_value(fwd, market)
    if isinstance(method, McConfig):
        # one sampler over shared draws so the stderr is that of the net adjustment
        T = fwd.maturity

        def sampler(rng, n):
            tau_a, tau_b = model.sample_pairs(rng, n, antithetic=method.antithetic)
            hit_a = tau_a <= T
            hit_b = tau_b <= T
            ta = np.where(hit_a, tau_a, 0.0)
            tb = np.where(hit_b, tau_b, 0.0)
            udva = np.where(
                hit_a,
                market.curve.discount_factors(0.0, ta)
                * _exposure_at(fwd, market, ta, rng, estimator, put=True),
                0.0,
            )
            ucva = np.where(
                hit_b,
                market.curve.discount_factors(0.0, tb)
                * _exposure_at(fwd, market, tb, rng, estimator, put=False),
                0.0,
            )
            return credit.lgd_a * udva - credit.lgd_b * ucva

        adj = estimate(sampler, method, threads=threads)
        return McEstimate(v0 + adj.mean, adj.std_error, adj.n)
    ucva = ucva_forward(fwd, credit, model, market, method)
    udva = udva_forward(fwd, credit, model, market, method)
    return McEstimate(v0 + udva.mean - ucva.mean, 0.0, 0)


def bcva_full_forward(
    fwd: EquityForward,
    credit: CreditParams,
    model: GumbelBivariateExponential,
    market: Market,
    method: McConfig | str = SEMI_ANALYTIC,
    estimator: str = "conditional",
    threads: int = 1,
) -> BcvaReport:
    """All adjustment figures for one forward valuation."""
    v0 = risk_free_forward_value(fwd, market)
    ucva = ucva_forward(fwd, credit, model, market, method, estimator, threads)
    udva = udva_forward(fwd, credit, model, market, method, estimator, threads)
    cva, dva = bilateral_terms_forward(fwd, credit, model, market, method, estimator, threads)
    diff = difference_forward(fwd, credit, model, market, method, estimator, threads)
    full = v0 + dva.mean - cva.mean
    simplified = v0 + udva.mean - ucva.mean
    return BcvaReport(
        risk_free_value=v0,
        ucva_a=ucva.mean,
        udva_a=udva.mean,
        bilateral_cva=cva.mean,
        bilateral_dva=dva.mean,
        full_price=full,
        simplified_price=simplified,
        difference=diff.mean,
        std_errors={
            "ucva_a": ucva.std_error,
            "udva_a": udva.std_error,
            "bilateral_cva": cva.std_error,
            "bilateral_dva": dva.std_error,
            "full_price": math.hypot(cva.std_error, dva.std_error),
            "simplified_price": math.hypot(ucva.std_error, udva.std_error),
            "difference": diff.std_error,
        },
    )


# ----------------------------------------------------------------------
# zero-coupon bond: everything in closed form / quadrature


def zcb_report(
    bond: ZeroCouponBond,
    credit: CreditParams,
    model: GumbelBivariateExponential,
    market: Market,
) -> BcvaReport:
    """Adjustments for a unit zero-coupon bond lent by A to B.

    Exposure is unidirectional (A can only lose), so all quantities reduce
    to order probabilities of the default times. The substitution-closeout
    price P(0,T)(1 - lgd_b Q(tau_B < T)) coincides with the simplified price.
    """
    T = bond.maturity
    p = market.curve.zcb_price(0.0, T)
    q_b = -math.expm1(-model.lambda_b * T)
    q_b_first = model.prob_order_before(T, "b_first")
    q_a_then_b = q_b - q_b_first
    ucva = credit.lgd_b * p * q_b
    bil_cva = credit.lgd_b * p * q_b_first
    full = p - bil_cva
    simplified = p - ucva
    return BcvaReport(
        risk_free_value=p,
        ucva_a=ucva,
        udva_a=0.0,
        bilateral_cva=bil_cva,
        bilateral_dva=0.0,
        full_price=full,
        simplified_price=simplified,
        difference=credit.lgd_b * p * q_a_then_b,
        std_errors={},
        substitution_closeout_price=p * (1.0 - credit.lgd_b * q_b),
    )
