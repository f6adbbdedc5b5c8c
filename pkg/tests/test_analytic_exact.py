"""Tests for the exact outage evaluators.

Reference values were computed independently with mpmath tanh-sinh
quadrature of the defining integrals (16 digits), then frozen here.
"""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from crn_outage.analytic_exact import (
    InternalConsistencyError,
    QuadratureError,
    QuadratureSpec,
    primary_i1,
    primary_op_exact,
    secondary_op_exact,
)
from crn_outage.model import derive_thresholds
from crn_outage.special_functions import regularized_lower_gamma

from conftest import make_params

REL_TOL = 1e-7

# (snr_db, rho, alpha, m-overrides or None, expected)
PRIMARY_REFS = [
    (0.0, 0.5, 0.5, None, 0.84598879946574),
    (10.0, 0.5, 0.5, None, 0.40397706927785),
    (20.0, 0.5, 0.5, None, 0.12129306008239),
    (10.0, 0.5, 0.9, None, 0.20761354482944),
    (20.0, 0.5, 0.9, (1.5, 1.5, 1.5, 1.5, 0.6), 0.00058470945897195),
]
SECONDARY_REFS = [
    (0.0, 0.5, 0.2, None, 0.99999462048476),
    (10.0, 0.5, 0.2, None, 0.77203835800126),
    (20.0, 0.5, 0.2, None, 0.11906717154642),
    (20.0, 0.5, 0.5, (0.6, 1.5, 1.5, 1.5, 1.5), 0.15199958352107),
]

I1_REF_10DB = 0.1155255043001643


def params_from_row(snr_db, rho, alpha, m):
    if m is None:
        return make_params(snr_db=snr_db, rho=rho, alpha=alpha)
    return make_params(snr_db=snr_db, rho=rho, alpha=alpha, m=m)


class TestPrimaryI1:
    def test_frozen_reference(self):
        got = primary_i1(make_params(snr_db=10.0))
        assert abs(got - I1_REF_10DB) / I1_REF_10DB < 1e-9

    def test_rayleigh_closed_form(self):
        ones = (1.0,) * 5
        p = make_params(snr_db=8.0, rho=0.4, alpha=0.6, m=ones)
        thr = derive_thresholds(p)
        want = (-math.expm1(-thr.theta1 / p.links[1].beta)) * (-math.expm1(-thr.theta0 / p.links[0].beta))
        assert abs(primary_i1(p) - want) < 1e-14

    def test_vanishes_at_high_snr(self):
        assert primary_i1(make_params(snr_bar=1e12)) < 1e-6

    def test_full_split_keeps_direct_factor(self):
        p = make_params(rho=1.0)
        thr = derive_thresholds(p)
        want = regularized_lower_gamma(p.links[0].m, thr.theta0 / p.links[0].omega)
        assert abs(primary_i1(p) - want) < 1e-14


class TestFrozenReferences:
    @pytest.mark.parametrize("snr_db,rho,alpha,m,want", PRIMARY_REFS)
    def test_primary(self, snr_db, rho, alpha, m, want):
        got = primary_op_exact(params_from_row(snr_db, rho, alpha, m))
        assert abs(got - want) / want < REL_TOL

    @pytest.mark.parametrize("snr_db,rho,alpha,m,want", SECONDARY_REFS)
    def test_secondary(self, snr_db, rho, alpha, m, want):
        got = secondary_op_exact(params_from_row(snr_db, rho, alpha, m))
        assert abs(got - want) / want < REL_TOL


class TestDegenerateEndpoints:
    def test_rho_one_is_direct_link_only(self):
        p = make_params(rho=1.0)
        thr = derive_thresholds(p)
        want = regularized_lower_gamma(p.links[0].m, thr.theta0 / p.links[0].omega)
        assert primary_op_exact(p) == pytest.approx(want, abs=1e-14)
        assert secondary_op_exact(p) == 1.0

    def test_rho_zero_closed_form_and_continuity(self):
        p0 = make_params(rho=0.0)
        eps = make_params(rho=1e-9)
        assert secondary_op_exact(p0) == 1.0
        assert abs(primary_op_exact(p0) - primary_op_exact(eps)) < 1e-6

    def test_alpha_zero_closed_form_and_continuity(self):
        p0 = make_params(alpha=0.0)
        eps = make_params(alpha=1e-9)
        assert abs(primary_op_exact(p0) - primary_op_exact(eps)) < 1e-6

    def test_alpha_one_secondary_certain(self):
        assert secondary_op_exact(make_params(alpha=1.0)) == 1.0


class TestCaseStructure:
    def test_primary_continuous_across_case_boundary(self):
        # T1 = 3 puts the primary boundary at alpha = 0.75
        lo = primary_op_exact(make_params(snr_db=10.0, alpha=0.75 - 1e-8))
        hi = primary_op_exact(make_params(snr_db=10.0, alpha=0.75 + 1e-8))
        assert abs(hi - lo) < 1e-6

    def test_secondary_continuous_across_case_boundary(self):
        lo = secondary_op_exact(make_params(snr_db=10.0, alpha=0.25 - 1e-6))
        hi = secondary_op_exact(make_params(snr_db=10.0, alpha=0.25 + 1e-6))
        assert abs(hi - lo) < 1e-6

    def test_j1_only_limit(self):
        # superb SR-side links, cancellation-free route viable: only the
        # decode failure at ST remains
        p = make_params(snr_db=10.0, alpha=0.2,
                        beta=(1.0, 1.5, 1.5, 1e8, 1e8))
        thr = derive_thresholds(p)
        j1 = regularized_lower_gamma(p.links[1].m, thr.theta1 / p.links[1].omega)
        assert abs(secondary_op_exact(p) - j1) < 1e-4

    def test_monotone_in_snr(self):
        for alpha, fn in ((0.5, primary_op_exact), (0.2, secondary_op_exact)):
            values = [fn(make_params(snr_db=float(db), alpha=alpha))
                      for db in range(0, 41, 5)]
            assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))


def test_range_over_randomized_grid():
    rng = np.random.Generator(np.random.PCG64(2718))
    # Range checking does not need tight quadrature; the loose spec keeps the
    # 1000-point grid affordable at high SNR where the inner integral is stiff.
    loose = QuadratureSpec(abs_tol=1e-6, rel_tol=1e-4)
    for _ in range(1000):
        m = 0.5 + 2.5 * rng.random(5)
        beta = 0.2 + 2.8 * rng.random(5)
        p = make_params(snr_db=float(rng.uniform(-5.0, 45.0)),
                        rho=float(rng.uniform(0.02, 0.98)),
                        alpha=float(rng.random()),
                        mu=float(rng.uniform(0.0, 2.0)),
                        r0=float(rng.choice([0.5, 1.0, 2.0])),
                        m=tuple(m), beta=tuple(beta))
        for value in (primary_op_exact(p, loose), secondary_op_exact(p, loose)):
            assert 0.0 <= value <= 1.0


def test_rayleigh_construction_equivalence():
    # Independent evaluation at all m=1: same integrals, hand-written with
    # plain exponentials and scipy quadrature only.
    ones = (1.0,) * 5
    beta = (1.0, 1.5, 1.5, 1.5, 1.0)
    for snr_db, rho, alpha in [(5.0, 0.5, 0.5), (15.0, 0.7, 0.3),
                               (20.0, 0.3, 0.85), (10.0, 0.6, 0.2)]:
        p = make_params(snr_db=snr_db, rho=rho, alpha=alpha, m=ones, beta=beta)
        thr = derive_thresholds(p)
        b0, b1, b2, b3, b4 = beta
        one_mu = 1.0 + p.mu
        scale = p.snr_bar * rho * p.eta
        psi0 = thr.psi0

        def inner(x):
            rem = thr.t1 - x
            den = alpha - rem * (1.0 - alpha)
            if den <= 0.0:
                return math.exp(-thr.theta1 / b1)
            w = rem * one_mu / (b2 * scale * den)
            val, _ = quad(lambda z: math.exp(-z / b1) / b1 * (1.0 - math.exp(-w / z)),
                          thr.theta1, np.inf, epsabs=1e-13, epsrel=1e-11, limit=200)
            return val

        ratio = alpha / (1.0 - alpha)
        i1 = (-math.expm1(-thr.theta1 / b1)) * (-math.expm1(-thr.theta0 / b0))
        if thr.t1 <= ratio:
            i2, _ = quad(lambda x: math.exp(-x / psi0) / psi0 * inner(x),
                         0.0, thr.t1, epsabs=1e-12, epsrel=1e-10, limit=200)
            want_p = i1 + i2
        else:
            x_lo = thr.t1 - ratio
            head = math.exp(-thr.theta1 / b1) * (-math.expm1(-x_lo / psi0))
            i2, _ = quad(lambda x: math.exp(-x / psi0) / psi0 * inner(x),
                         x_lo, thr.t1, epsabs=1e-12, epsrel=1e-10, limit=200)
            want_p = i1 + head + i2
        assert abs(primary_op_exact(p) - want_p) < 1e-8

        j1 = -math.expm1(-thr.theta1 / b1)
        f4 = -math.expm1(-thr.theta2 / b4)

        def tail(k):
            val, _ = quad(lambda x: math.exp(-x / b1) / b1 * (1.0 - math.exp(-k / (b3 * x))),
                          thr.theta1, np.inf, epsabs=1e-13, epsrel=1e-11, limit=200)
            return val

        k_ic = thr.theta2 / (rho * p.eta * (1.0 - alpha))
        if thr.t1 >= (1.0 - alpha) / alpha:
            want_s = j1 + (1.0 - j1) * f4 + (1.0 - f4) * tail(k_ic)
        else:
            k_no = thr.theta2 / (rho * p.eta * (1.0 - alpha - alpha * thr.t1))
            want_s = j1 + f4 * tail(k_no) + (1.0 - f4) * tail(k_ic)
        assert abs(secondary_op_exact(p) - want_s) < 1e-8


def test_unreachable_tolerance_raises():
    spec = QuadratureSpec(abs_tol=1e-300, rel_tol=1.2e-14, max_subdivisions=1)
    with pytest.raises(QuadratureError) as info:
        primary_op_exact(make_params(snr_db=10.0, alpha=0.5), spec)
    assert info.value.error_estimate > 0.0


def test_internal_consistency_guard_exists():
    assert issubclass(InternalConsistencyError, RuntimeError)
