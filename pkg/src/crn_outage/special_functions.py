"""Gamma-function family used by every analytic outage expression.

Covers the complete Gamma function, the lower/upper incomplete forms, the
regularized lower form (a Gamma CDF), and a generalized upper incomplete
Gamma that accepts any real shape argument: for x > 0 the tail integral
converges even when a is zero or negative, which is exactly the case that
shows up in coefficients of the form Gamma(m1 - m3, x).

Everything is scalar pure Python on top of ``math``, so the functions are
stateless and safe to call from any number of worker processes.  Internal
assembly happens in log space where overflow is a concern.
"""

from __future__ import annotations

import math

__all__ = [
    "NonConvergenceError",
    "gamma_complete",
    "lower_incomplete_gamma",
    "regularized_lower_gamma",
    "upper_incomplete_gamma_general",
    "small_x_lower_gamma_approx",
]

# Termination: stop when a term falls below _TOL of the running sum; give up
# past _MAX_ITER and raise instead of returning a silently bad value.
_TOL = 1e-15
_MAX_ITER = 500

# Floor used by the modified Lentz recurrence to avoid division by zero.
_TINY = 1e-300

_EULER_GAMMA = 0.5772156649015329

# Shapes this close to a non-positive integer are treated as that integer:
# the reflection formula degenerates there and the E1/recurrence path takes
# over.
_INT_SNAP = 1e-12


class NonConvergenceError(ArithmeticError):
    """Series or continued fraction failed to converge within the cap."""


def gamma_complete(a: float) -> float:
    """Complete Gamma function for a > 0."""
    if a <= 0.0:
        raise ValueError(f"gamma_complete requires a > 0, got a={a} "
                         "(poles at non-positive integers)")
    return math.gamma(a)


def _lower_series_sum(a: float, x: float) -> float:
    """Sum S = sum_n x^n / (a (a+1) ... (a+n)), so gamma(a,x) = x^a e^-x S.

    Converges fastest for x < a + 1, which is the only regime we call it in.
    """
    term = 1.0 / a
    total = term
    for n in range(1, _MAX_ITER + 1):
        term *= x / (a + n)
        total += term
        if abs(term) < abs(total) * _TOL:
            return total
    raise NonConvergenceError(
        f"lower-gamma series for a={a}, x={x} did not converge "
        f"within {_MAX_ITER} terms")


def _upper_cf(a: float, x: float) -> float:
    """Modified Lentz continued fraction for Gamma(a,x) e^x x^-a.

    Reliable for x >= a + 1 when a > 0, and for x >= 1 for any real a.
    """
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b if abs(b) >= _TINY else 1.0 / _TINY
    h = d
    for i in range(1, _MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _TOL:
            return h
    raise NonConvergenceError(
        f"continued fraction for Gamma({a}, {x}) did not converge "
        f"within {_MAX_ITER} iterations")


def _regularized_upper_cf(a: float, x: float) -> float:
    """Q(a,x) = Gamma(a,x)/Gamma(a) via the continued fraction (a > 0)."""
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * _upper_cf(a, x)


def regularized_lower_gamma(a: float, x: float) -> float:
    """P(a,x) = gamma(a,x) / Gamma(a), the Gamma(a, scale 1) CDF at x."""
    if a <= 0.0:
        raise ValueError(f"regularized_lower_gamma requires a > 0, got a={a}")
    if x < 0.0:
        raise ValueError(f"regularized_lower_gamma requires x >= 0, got x={x}")
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0
    if x < a + 1.0:
        s = _lower_series_sum(a, x)
        p = s * math.exp(a * math.log(x) - x - math.lgamma(a))
    else:
        p = 1.0 - _regularized_upper_cf(a, x)
    # clamp 1-ulp excursions from the log-space round trip
    return min(1.0, max(0.0, p))


def lower_incomplete_gamma(a: float, x: float) -> float:
    """Unregularized lower incomplete gamma(a,x), a > 0, x >= 0."""
    if a <= 0.0:
        raise ValueError(f"lower_incomplete_gamma requires a > 0, got a={a}")
    if x < 0.0:
        raise ValueError(f"lower_incomplete_gamma requires x >= 0, got x={x}")
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return math.gamma(a)
    if x < a + 1.0:
        s = _lower_series_sum(a, x)
        return s * math.exp(a * math.log(x) - x)
    return math.gamma(a) * (1.0 - _regularized_upper_cf(a, x))


def _e1_series(x: float) -> float:
    """Exponential integral E1(x) = Gamma(0,x) by series, for 0 < x < 1."""
    total = -_EULER_GAMMA - math.log(x)
    term = 1.0
    for k in range(1, _MAX_ITER + 1):
        term *= -x / k
        total -= term / k
        if abs(term) < (abs(total) + _TINY) * _TOL:
            return total
    raise NonConvergenceError(
        f"E1 series for x={x} did not converge within {_MAX_ITER} terms")


def _upper_small_x_nonpositive(a: float, x: float) -> float:
    """Gamma(a,x) for a <= 0 and 0 < x < 1 where the CF is unreliable.

    Non-positive integer shapes go through E1 plus the downward recurrence
    Gamma(a-1,x) = (Gamma(a,x) - x^{a-1} e^{-x}) / (a-1); other shapes use
    the reflection formula for Gamma(a) minus the alternating power series
    of the lower incomplete integral.
    """
    nearest = round(a)
    if abs(a - nearest) < _INT_SNAP:
        g = _e1_series(x)
        ex = math.exp(-x)
        for m in range(0, int(nearest), -1):
            g = (g - math.pow(x, m - 1) * ex) / (m - 1)
        return g
    # Gamma(a) by reflection keeps us off math.gamma's pole guard.
    complete = math.pi / (math.sin(math.pi * a) * math.gamma(1.0 - a))
    # gamma(a,x) = x^a sum_k (-x)^k / (k! (a+k)), alternating, fast for x < 1
    term = 1.0
    total = 1.0 / a
    for k in range(1, _MAX_ITER + 1):
        term *= -x / k
        contrib = term / (a + k)
        total += contrib
        if abs(contrib) < (abs(total) + _TINY) * _TOL:
            return complete - math.pow(x, a) * total
    raise NonConvergenceError(
        f"lower-gamma reflection series for a={a}, x={x} did not converge "
        f"within {_MAX_ITER} terms")


def upper_incomplete_gamma_general(a: float, x: float) -> float:
    """Gamma(a,x) = integral_x^inf t^{a-1} e^{-t} dt for any real a, x > 0.

    x = 0 is allowed only for a > 0 (the integral diverges at the origin
    otherwise) and returns the complete Gamma function.
    """
    if x < 0.0:
        raise ValueError(f"upper_incomplete_gamma_general requires x >= 0, got x={x}")
    if x == 0.0:
        if a > 0.0:
            return math.gamma(a)
        raise ValueError(
            f"Gamma(a,x) diverges at the origin for a={a} <= 0; need x > 0")
    if math.isinf(x):
        return 0.0
    if a > 0.0:
        if x < a + 1.0:
            s = _lower_series_sum(a, x)
            p = s * math.exp(a * math.log(x) - x - math.lgamma(a))
            return math.gamma(a) * (1.0 - p)
        return math.exp(-x + a * math.log(x)) * _upper_cf(a, x)
    if x >= 1.0:
        return math.exp(-x + a * math.log(x)) * _upper_cf(a, x)
    return _upper_small_x_nonpositive(a, x)


def small_x_lower_gamma_approx(a: float, x: float) -> float:
    """Leading-order gamma(a,x) ~ x^a / a, the small-argument workhorse."""
    if a <= 0.0:
        raise ValueError(f"small_x_lower_gamma_approx requires a > 0, got a={a}")
    if x < 0.0:
        raise ValueError(f"small_x_lower_gamma_approx requires x >= 0, got x={x}")
    return math.pow(x, a) / a
