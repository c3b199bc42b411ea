import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bcva import DiscountCurve, GbmEquity, McConfig, estimate, forward_npv


class TestDiscountCurve:
    def test_zero_rate_is_unity(self):
        assert DiscountCurve(0.0).discount_factor(0.0, 5.0) == 1.0

    def test_t_equals_maturity(self):
        assert DiscountCurve(0.03).discount_factor(0.0, 0.0) == 1.0

    def test_direct_formula(self):
        assert DiscountCurve(0.03).discount_factor(1.0, 3.0) == pytest.approx(
            math.exp(-0.06), rel=1e-12
        )

    @pytest.mark.parametrize("t,T", [(2.0, 1.0), (-1.0, 1.0)])
    def test_invalid_times_raise(self, t, T):
        with pytest.raises(ValueError):
            DiscountCurve(0.03).discount_factor(t, T)

    @given(
        r=st.floats(0.0, 0.2),
        t=st.floats(0.0, 10.0),
        du=st.floats(0.0, 10.0),
        dv=st.floats(0.0, 10.0),
    )
    def test_splicing(self, r, t, du, dv):
        curve = DiscountCurve(r)
        u, T = t + du, t + du + dv
        product = curve.discount_factor(t, u) * curve.discount_factor(u, T)
        assert product == pytest.approx(curve.discount_factor(t, T), rel=1e-12)

    @given(r=st.floats(0.0, 0.2), T1=st.floats(0.0, 10.0), dT=st.floats(0.0, 10.0))
    def test_monotone_for_nonnegative_rate(self, r, T1, dT):
        curve = DiscountCurve(r)
        assert curve.discount_factor(0.0, T1 + dT) <= curve.discount_factor(0.0, T1)


class TestGbmTerminal:
    def test_t_zero_returns_spot(self):
        eq = GbmEquity(1.0, 0.4)
        assert eq.terminal(0.0, 1.7) == 1.0

    def test_median_path(self):
        eq = GbmEquity(1.0, 0.4)
        assert eq.terminal(5.0, 0.0) == pytest.approx(math.exp(-0.4), rel=1e-12)

    def test_positivity(self):
        eq = GbmEquity(1.0, 0.4)
        rng = np.random.default_rng(0)
        s = eq.terminal(5.0, rng.standard_normal(10_000))
        assert np.all(s > 0.0)

    def test_zero_rate_martingale(self):
        eq = GbmEquity(1.0, 0.4)

        def sampler(rng, n):
            return eq.terminal(5.0, rng.standard_normal(n))

        est = estimate(sampler, McConfig(n_paths=1_000_000, seed=42))
        assert abs(est.mean - 1.0) < 3.0 * est.std_error


class TestBlackOptions:
    def test_atm_call_closed_form(self):
        # E[(S_5 - 1)^+] for s0=1, sigma=0.4, r=0 is 2*Phi(0.2*sqrt(5)) - 1
        eq = GbmEquity(1.0, 0.4)
        expected = math.erf(0.2 * math.sqrt(5.0) / math.sqrt(2.0))
        assert eq.black_call(5.0, 1.0) == pytest.approx(expected, rel=1e-12)

    def test_atm_put_equals_call_at_zero_rate(self):
        eq = GbmEquity(1.0, 0.4)
        assert eq.black_put(5.0, 1.0) == pytest.approx(eq.black_call(5.0, 1.0), rel=1e-12)

    def test_zero_strike(self):
        eq = GbmEquity(1.0, 0.4)
        assert eq.black_call(5.0, 0.0) == 1.0
        assert eq.black_put(5.0, 0.0) == 0.0

    def test_t_zero_intrinsic(self):
        eq = GbmEquity(1.0, 0.4)
        assert eq.black_call(0.0, 0.7) == pytest.approx(0.3, abs=1e-15)
        assert eq.black_put(0.0, 1.4) == pytest.approx(0.4, abs=1e-15)

    @pytest.mark.parametrize("t,k", [(-1.0, 1.0), (1.0, -0.5)])
    def test_invalid_arguments(self, t, k):
        with pytest.raises(ValueError):
            GbmEquity(1.0, 0.4).black_call(t, k)

    @given(
        rate=st.sampled_from([0.0, 0.03]),
        t=st.floats(0.01, 10.0),
        k=st.floats(0.01, 3.0),
    )
    def test_put_call_parity(self, rate, t, k):
        eq = GbmEquity(1.0, 0.4)
        lhs = eq.black_call(t, k, rate) - eq.black_put(t, k, rate)
        assert lhs == pytest.approx(math.exp(rate * t) - k, rel=1e-12, abs=1e-12)

    def test_call_decreasing_in_strike_increasing_in_vol_and_time(self):
        ks = [0.5, 0.8, 1.0, 1.3, 2.0]
        calls = [GbmEquity(1.0, 0.4).black_call(5.0, k) for k in ks]
        assert all(a > b for a, b in zip(calls, calls[1:]))
        vols = [GbmEquity(1.0, s).black_call(5.0, 1.0) for s in (0.1, 0.2, 0.4, 0.6)]
        assert all(a < b for a, b in zip(vols, vols[1:]))
        times = [GbmEquity(1.0, 0.4).black_call(t, 1.0) for t in (0.5, 1.0, 2.0, 5.0)]
        assert all(a < b for a, b in zip(times, times[1:]))

    @pytest.mark.parametrize("t,k", [(1.0, 0.8), (2.0, 1.0), (5.0, 0.8), (5.0, 1.2)])
    def test_mc_oracle_grid(self, t, k):
        eq = GbmEquity(1.0, 0.4)

        def payoff(rng, n):
            return np.maximum(eq.terminal(t, rng.standard_normal(n)) - k, 0.0)

        est = estimate(payoff, McConfig(n_paths=1_000_000, seed=7))
        assert abs(est.mean - eq.black_call(t, k)) < 3.0 * est.std_error

    def test_mc_oracle_large_sample(self):
        eq = GbmEquity(1.0, 0.4)

        def payoff(rng, n):
            return np.maximum(eq.terminal(5.0, rng.standard_normal(n)) - 1.0, 0.0)

        est = estimate(payoff, McConfig(n_paths=10_000_000, seed=11), threads=4)
        assert abs(est.mean - eq.black_call(5.0, 1.0)) < 3.0 * est.std_error


class TestForwardNpv:
    def test_zero_rate(self):
        assert forward_npv(1.2, 1.0, 2.0, 5.0, DiscountCurve(0.0)) == pytest.approx(0.2)

    def test_at_the_money(self):
        assert forward_npv(0.8, 0.8, 1.0, 5.0, DiscountCurve(0.0)) == 0.0

    def test_nonzero_rate(self):
        value = forward_npv(1.0, 1.0, 2.0, 5.0, DiscountCurve(0.03))
        assert value == pytest.approx(1.0 - math.exp(-0.09), rel=1e-12)

    def test_t_beyond_maturity_raises(self):
        with pytest.raises(ValueError):
            forward_npv(1.0, 1.0, 6.0, 5.0, DiscountCurve(0.0))
