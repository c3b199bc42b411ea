"""Desk-scale invariant suite behind the `validate` CLI subcommand.

Every check re-verifies a contract of the library against an independent
route (closed forms, finite differences, simulation) at <= 10^6 paths with
fixed seeds, so the report is deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .default_model import GumbelBivariateExponential
from .engine import (
    CreditParams,
    EquityForward,
    Market,
    ZeroCouponBond,
    bcva_full_forward,
    bcva_simplified_forward,
    difference_forward,
    zcb_report,
)
from .market import DiscountCurve, GbmEquity
from .mc import McConfig, chunk_generator, estimate

_SEED = 20110201


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _std_market() -> Market:
    return Market(DiscountCurve(0.0), GbmEquity(s0=1.0, sigma=0.4))


def check_discount_curve() -> CheckResult:
    curve = DiscountCurve(0.03)
    ok = True
    worst = 0.0
    for t, u, T in [(0.0, 1.0, 2.0), (1.0, 2.5, 7.0), (0.5, 0.5, 3.0)]:
        err = abs(
            curve.discount_factor(t, u) * curve.discount_factor(u, T)
            - curve.discount_factor(t, T)
        )
        worst = max(worst, err)
        ok &= err < 1e-15
        ok &= curve.discount_factor(t, t) == 1.0
    return CheckResult("discount-curve-identities", bool(ok), f"max splice error {worst:.2e}")


def check_put_call_parity() -> CheckResult:
    worst = 0.0
    for rate in (0.0, 0.03):
        eq = GbmEquity(1.0, 0.4)
        for t in (0.5, 2.0, 5.0):
            for k in (0.5, 0.8, 1.0, 1.5):
                lhs = eq.black_call(t, k, rate) - eq.black_put(t, k, rate)
                rhs = eq.s0 * math.exp(rate * t) - k
                worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
    return CheckResult("put-call-parity", worst < 1e-12, f"max relative error {worst:.2e}")


def check_black_mc_oracle() -> CheckResult:
    eq = GbmEquity(1.0, 0.4)
    worst = 0.0
    for i, (t, k) in enumerate([(1.0, 1.0), (5.0, 0.8), (5.0, 1.0)]):
        def payoff(rng, n, t=t, k=k):
            z = rng.standard_normal(n)
            return np.maximum(eq.terminal(t, z) - k, 0.0)

        est = estimate(payoff, McConfig(n_paths=400_000, seed=_SEED + i))
        z_score = abs(est.mean - eq.black_call(t, k)) / est.std_error
        worst = max(worst, z_score)
    return CheckResult("black-call-mc-oracle", worst < 3.0, f"max |z| {worst:.2f}")


def check_survival_marginals() -> CheckResult:
    model = GumbelBivariateExponential(0.1, 0.05, 3.0)
    worst = 0.0
    for x in (0.0, 0.5, 2.0, 10.0):
        worst = max(worst, abs(model.joint_survival(x, 0.0) - math.exp(-0.1 * x)))
        worst = max(worst, abs(model.joint_survival(0.0, x) - math.exp(-0.05 * x)))
    return CheckResult("survival-marginals", worst < 1e-14, f"max error {worst:.2e}")


def check_partial_finite_difference() -> CheckResult:
    # rel 1e-6 with an absolute floor at the central-difference noise level
    worst = 0.0
    h = 1e-6
    for theta in (1.0, 2.0, 7.5):
        model = GumbelBivariateExponential(0.1, 0.05, theta)
        for x1, x2 in [(1.0, 1.0), (3.0, 0.5), (0.2, 4.0)]:
            fd = (model.joint_survival(x1, x2 + h) - model.joint_survival(x1, x2 - h)) / (2 * h)
            exact = model.survival_partial_x2(x1, x2)
            worst = max(worst, abs(fd - exact) / (1e-6 * abs(exact) + 1e-8))
            if exact > 0.0:
                return CheckResult(
                    "partial-finite-difference", False, f"positive partial at {(x1, x2)}"
                )
    return CheckResult("partial-finite-difference", worst < 1.0, f"worst error ratio {worst:.2e}")


def check_marginal_density_mass() -> CheckResult:
    from scipy import integrate

    model = GumbelBivariateExponential(0.1, 0.05, 4.0)
    mass, _ = integrate.quad(lambda t: -model.survival_partial_x2(0.0, t), 0.0, np.inf)
    err = abs(mass - 1.0)
    return CheckResult("marginal-density-mass", err < 1e-9, f"|mass - 1| {err:.2e}")


def check_order_probability_partition() -> CheckResult:
    worst = 0.0
    for theta in (1.0, 2.0, 10.0):
        model = GumbelBivariateExponential(0.1, 0.05, theta)
        for T in (1.0, 5.0):
            lhs = model.prob_order_before(T, "b_first") + model.prob_sequence_before(T, "a")
            rhs = -math.expm1(-model.lambda_b * T)
            worst = max(worst, abs(lhs - rhs))
    return CheckResult("order-probability-partition", worst < 1e-10, f"max error {worst:.2e}")


def check_sampler_quadrature_agreement() -> CheckResult:
    n = 200_000
    worst = 0.0
    for i, theta in enumerate((1.0, 2.0, 10.0)):
        model = GumbelBivariateExponential(0.1, 0.05, theta)
        rng = chunk_generator(_SEED + 10 + i, 0)
        tau_a, tau_b = model.sample_pairs(rng, n)
        for T in (1.0, 5.0):
            p_hat = float(np.mean((tau_b < tau_a) & (tau_b < T)))
            p = model.prob_order_before(T, "b_first")
            se = math.sqrt(max(p * (1 - p), 1e-12) / n)
            worst = max(worst, abs(p_hat - p) / se)
    return CheckResult("sampler-quadrature-agreement", worst < 3.0, f"max |z| {worst:.2f}")


def check_no_ties() -> CheckResult:
    model = GumbelBivariateExponential(0.1, 0.05, 10.0)
    rng = chunk_generator(_SEED + 20, 0)
    tau_a, tau_b = model.sample_pairs(rng, 1_000_000)
    frac = float(np.mean(tau_a == tau_b))
    return CheckResult("no-simultaneous-defaults", frac < 1e-6, f"tie fraction {frac:.2e}")


def check_kendall_tau_empirical() -> CheckResult:
    worst = 0.0
    for i, theta in enumerate((2.0, 10.0)):
        model = GumbelBivariateExponential(0.1, 0.05, theta)
        rng = chunk_generator(_SEED + 30 + i, 0)
        tau_a, tau_b = model.sample_pairs(rng, 100_000)
        emp = stats.kendalltau(tau_a, tau_b).statistic
        worst = max(worst, abs(emp - model.kendall_tau()))
    return CheckResult("kendall-tau-empirical", worst < 0.01, f"max |error| {worst:.4f}")


def check_mc_determinism() -> CheckResult:
    model = GumbelBivariateExponential(0.1, 0.05, 10.0)
    fwd = EquityForward(strike=0.8, maturity=5.0)
    credit = CreditParams()
    market = _std_market()
    cfg = McConfig(n_paths=100_000, seed=_SEED, chunk_size=1 << 14)
    one = difference_forward(fwd, credit, model, market, cfg, threads=1)
    many = difference_forward(fwd, credit, model, market, cfg, threads=8)
    ok = one == many
    return CheckResult("mc-thread-determinism", ok, f"1-thread == 8-thread: {ok}")


def check_stderr_scaling() -> CheckResult:
    def sampler(rng, n):
        return rng.standard_normal(n) ** 2

    small = estimate(sampler, McConfig(n_paths=100_000, seed=_SEED + 40))
    big = estimate(sampler, McConfig(n_paths=400_000, seed=_SEED + 40))
    ratio = small.std_error / big.std_error
    return CheckResult(
        "stderr-quarter-scaling", abs(ratio - 2.0) < 0.4, f"se ratio {ratio:.3f} (expect 2)"
    )


def check_simplified_theta_independence() -> CheckResult:
    fwd = EquityForward(strike=1.0, maturity=5.0)
    credit = CreditParams()
    market = _std_market()
    values = [
        bcva_simplified_forward(
            fwd, credit, GumbelBivariateExponential(0.1, 0.05, th), market
        ).mean
        for th in (1.0, 2.0, 10.0)
    ]
    spread = max(values) - min(values)
    return CheckResult("simplified-theta-independence", spread < 1e-12, f"spread {spread:.2e}")


def check_report_decomposition() -> CheckResult:
    model = GumbelBivariateExponential(0.1, 0.05, 10.0)
    fwd = EquityForward(strike=0.8, maturity=5.0)
    credit = CreditParams()
    market = _std_market()
    rep = bcva_full_forward(fwd, credit, model, market, "semi_analytic")
    errs = [
        abs(rep.full_price - (rep.risk_free_value + rep.bilateral_dva - rep.bilateral_cva)),
        abs(rep.simplified_price - (rep.risk_free_value + rep.udva_a - rep.ucva_a)),
        abs(rep.difference - (rep.full_price - rep.simplified_price)),
    ]
    return CheckResult("report-decomposition", max(errs) < 1e-10, f"max error {max(errs):.2e}")


def check_estimator_consistency() -> CheckResult:
    fwd = EquityForward(strike=0.8, maturity=5.0)
    credit = CreditParams()
    market = _std_market()
    worst = 0.0
    for theta in (1.0, 2.0, 10.0):
        model = GumbelBivariateExponential(0.1, 0.05, theta)
        cfg = McConfig(n_paths=200_000, seed=_SEED + 50)
        mc = difference_forward(fwd, credit, model, market, cfg)
        exact = difference_forward(fwd, credit, model, market, "semi_analytic")
        worst = max(worst, abs(mc.mean - exact.mean) / mc.std_error)
    return CheckResult("mc-vs-semi-analytic", worst < 3.0, f"max |z| {worst:.2f}")


def check_zcb_closed_form() -> CheckResult:
    model = GumbelBivariateExponential(0.1, 0.05, 1.0)
    rep = zcb_report(ZeroCouponBond(5.0), CreditParams(), model, _std_market())
    la, lb, T = 0.1, 0.05, 5.0
    expected = -math.expm1(-lb * T) - lb / (la + lb) * -math.expm1(-(la + lb) * T)
    err = abs(rep.difference - expected)
    sub_err = abs(rep.substitution_closeout_price - rep.simplified_price)
    ok = err < 1e-9 and sub_err < 1e-14
    return CheckResult("zcb-closed-form", ok, f"diff error {err:.2e}, closeout gap {sub_err:.2e}")


ALL_CHECKS = [
    check_discount_curve,
    check_put_call_parity,
    check_black_mc_oracle,
    check_survival_marginals,
    check_partial_finite_difference,
    check_marginal_density_mass,
    check_order_probability_partition,
    check_sampler_quadrature_agreement,
    check_no_ties,
    check_kendall_tau_empirical,
    check_mc_determinism,
    check_stderr_scaling,
    check_simplified_theta_independence,
    check_report_decomposition,
    check_estimator_consistency,
    check_zcb_closed_form,
]


def run_all() -> list[CheckResult]:
    return [check() for check in ALL_CHECKS]
