"""Exact outage probabilities: closed-form decode/fail factors plus
numerical quadrature of the remaining one- and two-dimensional integrals.

The primary outage splits on whether the relay's power share can ever
supply the residual SNR the combiner still needs (T1 vs alpha/(1-alpha));
the secondary splits on whether the cancellation-free route can ever work
(T1 vs (1-alpha)/alpha, with the boundary in the always-fails case).
Degenerate rho/alpha endpoints are routed to closed forms instead of
being pushed through the quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.special import gammainccinv

from .model import SystemParams, derive_thresholds
from .special_functions import regularized_lower_gamma

__all__ = [
    "QuadratureSpec",
    "QuadratureError",
    "InternalConsistencyError",
    "primary_i1",
    "primary_op_exact",
    "secondary_op_exact",
]

# epsabs handed to QUADPACK: effectively zero so the requested accuracy is
# purely relative; the QuadratureSpec tolerances then act as the acceptance
# check on the error estimate QUADPACK reports.
_EPSABS_FLOOR = 1e-300


@dataclass(frozen=True)
class QuadratureSpec:
    """Accuracy contract for the quadrature-backed evaluations.

    tail_cutoff overrides the truncation point used if the semi-infinite
    inner integral has to fall back from the infinite-interval routine;
    None derives it from the integrated Gamma law so the discarded tail
    mass stays below abs_tol / 10.
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 200
    tail_cutoff: float | None = None

    def __post_init__(self):
        if self.abs_tol <= 0.0 or self.rel_tol <= 0.0:
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")


class QuadratureError(RuntimeError):
    """Quadrature could not reach the requested tolerance."""

    def __init__(self, label: str, value: float, error_estimate: float):
        self.label = label
        self.value = value
        self.error_estimate = error_estimate
        super().__init__(
            f"{label}: achieved error estimate {error_estimate:.3e} "
            f"exceeds tolerance (value {value:.6e})")


class InternalConsistencyError(RuntimeError):
    """A case branch saw a sign it cannot have; indicates a logic fault."""


def _quad_checked(fn, lo, hi, spec: QuadratureSpec, epsrel: float,
                  accept_abs: float, label: str) -> float:
    result = quad(fn, lo, hi, epsabs=_EPSABS_FLOOR, epsrel=epsrel,
                  limit=spec.max_subdivisions, full_output=1)
    value, abserr = result[0], result[1]
    if abserr > max(accept_abs, epsrel * abs(value)):
        raise QuadratureError(label, value, abserr)
    return value


def _gamma_density(x: float, m: float, omega: float) -> float:
    """Gamma(shape m, scale omega) density, assembled in log space."""
    if x <= 0.0:
        return 0.0
    return math.exp((m - 1.0) * math.log(x) - x / omega
                    - m * math.log(omega) - math.lgamma(m))


def _decode_tail_cutoff(m1: float, omega1: float, spec: QuadratureSpec) -> float:
    """Truncation point leaving < abs_tol/10 of the g1 law beyond it."""
    if spec.tail_cutoff is not None:
        return spec.tail_cutoff
    tail_mass = min(0.5, spec.abs_tol / 10.0)
    return omega1 * float(gammainccinv(m1, tail_mass))


def _decode_weighted_tail(integrand, theta1: float, m1: float, omega1: float,
                          spec: QuadratureSpec, label: str) -> float:
    """integral_theta1^inf f_{g1}(x) * integrand-factor dx with fallback.

    Tries the infinite-interval routine first; if its error estimate misses
    the target, retries on the truncated interval whose discarded Gamma
    tail mass is below abs_tol / 10.
    """
    epsrel = spec.rel_tol / 10.0
    try:
        return _quad_checked(integrand, theta1, np.inf, spec, epsrel,
                             spec.abs_tol, label)
    except QuadratureError:
        hi = _decode_tail_cutoff(m1, omega1, spec)
        if hi <= theta1:
            # the whole decode region is inside the discarded tail budget
            return 0.0
        return _quad_checked(integrand, theta1, hi, spec, epsrel,
                             spec.abs_tol, label + " (truncated)")


def primary_i1(params: SystemParams) -> float:
    """Probability that ST fails to decode and the direct link fails too.

    At rho = 1 the decode threshold is the +inf sentinel, the first factor
    saturates at 1, and this degenerates to the direct-link term alone.
    """
    thr = derive_thresholds(params)
    l0, l1 = params.links[0], params.links[1]
    return (regularized_lower_gamma(l1.m, thr.theta1 / l1.omega)
            * regularized_lower_gamma(l0.m, thr.theta0 / l0.omega))


def primary_op_exact(params: SystemParams, quad_spec: QuadratureSpec | None = None) -> float:
    """Exact primary outage probability.

    The two quadrature cases split on T1 <= alpha/(1-alpha).  In the
    second case the inner incomplete-gamma argument diverges at the lower
    x-limit, so a relative-1e-12 boundary panel is integrated with the
    analytic limit value (the decode-success mass) instead.
    """
    spec = quad_spec if quad_spec is not None else QuadratureSpec()
    thr = derive_thresholds(params)
    l0, l1, l2 = params.links[0], params.links[1], params.links[2]
    rho, alpha = params.rho, params.alpha
    one_mu = 1.0 + params.mu

    if rho == 1.0:
        # nothing decoded, nothing harvested: only the direct link counts
        return regularized_lower_gamma(l0.m, thr.theta0 / l0.omega)

    i1 = primary_i1(params)
    q1 = 1.0 - regularized_lower_gamma(l1.m, thr.theta1 / l1.omega)
    if rho == 0.0 or alpha == 0.0:
        # relay phase carries no primary power; after a decode the combiner
        # sees the direct SNR against the half-pre-log threshold T1
        direct_fail = regularized_lower_gamma(l0.m, thr.t1 / thr.psi0)
        return min(1.0, i1 + q1 * direct_fail)

    harvest_scale = params.snr_bar * rho * params.eta

    def relay_fail_given_residual(x: float) -> float:
        """P[combined relay phase still short | gamma_PR_1 = x]."""
        residual = thr.t1 - x
        if residual <= 0.0:
            return 0.0
        den = alpha - residual * (1.0 - alpha)
        if den <= 0.0:
            # relay SNR saturates below the residual: fails for any g2
            return q1
        w = residual * one_mu / (l2.omega * harvest_scale * den)

        def z_integrand(z: float) -> float:
            return (_gamma_density(z, l1.m, l1.omega)
                    * regularized_lower_gamma(l2.m, w / z))

        return _decode_weighted_tail(z_integrand, thr.theta1, l1.m, l1.omega,
                                     spec, "primary inner integral")

    def outer_integrand(x: float) -> float:
        return _gamma_density(x, l0.m, thr.psi0) * relay_fail_given_residual(x)

    ratio = math.inf if alpha == 1.0 else alpha / (1.0 - alpha)
    if thr.t1 <= ratio:
        i2 = _quad_checked(outer_integrand, 0.0, thr.t1, spec, spec.rel_tol,
                           spec.abs_tol, "primary outer integral")
        result = i1 + i2
    else:
        x_lo = thr.t1 - ratio
        head = q1 * regularized_lower_gamma(l0.m, x_lo / thr.psi0)
        delta = 1e-12 * max(1.0, thr.t1)
        boundary = q1 * (regularized_lower_gamma(l0.m, (x_lo + delta) / thr.psi0)
                         - regularized_lower_gamma(l0.m, x_lo / thr.psi0))
        i2 = _quad_checked(outer_integrand, x_lo + delta, thr.t1, spec,
                           spec.rel_tol, spec.abs_tol, "primary outer integral")
        result = i1 + head + boundary + i2
    return min(1.0, max(0.0, result))


def secondary_op_exact(params: SystemParams, quad_spec: QuadratureSpec | None = None) -> float:
    """Exact secondary outage probability.

    When T1 >= (1-alpha)/alpha (boundary included) the cancellation-free
    route fails for every draw and only the cancellation route can save a
    realization whose side link pre-decoded the primary signal.
    """
    spec = quad_spec if quad_spec is not None else QuadratureSpec()
    rho, alpha = params.rho, params.alpha
    if alpha == 1.0 or rho == 0.0 or rho == 1.0:
        # no secondary power, or nothing harvested, or nothing decoded
        return 1.0

    thr = derive_thresholds(params)
    l1, l3, l4 = params.links[1], params.links[3], params.links[4]
    j1 = regularized_lower_gamma(l1.m, thr.theta1 / l1.omega)
    f4 = regularized_lower_gamma(l4.m, thr.theta2 / l4.omega)

    def decode_weighted_fail(k: float, label: str) -> float:
        """integral_theta1^inf f_{g1}(x) P(m3, k / (omega3 x)) dx."""

        def x_integrand(x: float) -> float:
            return (_gamma_density(x, l1.m, l1.omega)
                    * regularized_lower_gamma(l3.m, k / (l3.omega * x)))

        return _decode_weighted_tail(x_integrand, thr.theta1, l1.m, l1.omega,
                                     spec, label)

    k_ic = thr.theta2 / (rho * params.eta * (1.0 - alpha))
    ratio = math.inf if alpha == 0.0 else (1.0 - alpha) / alpha
    if thr.t1 >= ratio:
        result = (j1 + (1.0 - j1) * f4
                  + (1.0 - f4) * decode_weighted_fail(k_ic, "secondary IC integral"))
    else:
        den = 1.0 - alpha - alpha * thr.t1
        if den <= 0.0:
            raise InternalConsistencyError(
                f"no-cancellation branch needs 1 - alpha - alpha*T1 > 0, got {den} "
                f"(alpha={alpha}, T1={thr.t1})")
        k_no = thr.theta2 / (rho * params.eta * den)
        result = (j1 + f4 * decode_weighted_fail(k_no, "secondary no-IC integral")
                  + (1.0 - f4) * decode_weighted_fail(k_ic, "secondary IC integral"))
    return min(1.0, max(0.0, result))
