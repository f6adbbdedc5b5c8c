"""High-SNR behaviour of the two outage probabilities: tight closed-form
approximations, leading-order power laws, and the derived diversity order
(DO) and coding gain (CG) for each system, plus the Rayleigh (all m = 1)
closed forms.

Coefficient tables follow the usual convention: when two decay exponents
tie, the printed coefficient of the slower term contains a complete Gamma
factor at zero and is only formal.  Near such ties the power-law value is
meaningless at any finite SNR, so the asymptotic evaluators emit
CoefficientSingularityWarning and fall back to the full approximation,
and the characterization reports the diversity order alone.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .analytic_exact import primary_i1
from .model import SystemParams, derive_thresholds
from .special_functions import (
    gamma_complete,
    regularized_lower_gamma,
    upper_incomplete_gamma_general,
)

__all__ = [
    "AsymptoticCharacterization",
    "CoefficientSingularityWarning",
    "TIE_TOL",
    "SINGULAR_TOL",
    "primary_op_approx",
    "primary_op_asymptotic",
    "primary_do_cg",
    "secondary_op_approx",
    "secondary_op_asymptotic",
    "secondary_do_cg",
    "rayleigh_primary_op",
    "rayleigh_secondary_op",
]

# Exponents within TIE_TOL are classified as equal in the coefficient
# tables; fading figures are user-entered constants, so exact equality is
# the normal way a tie arises.
TIE_TOL = 1e-9

# Within SINGULAR_TOL of an m1 = m3 tie the slow-term coefficient carries
# Gamma(m1 - m3) -> infinity, so the one-term power law is useless even
# though the diversity order is still well defined.
SINGULAR_TOL = 1e-3


class CoefficientSingularityWarning(RuntimeWarning):
    """A coefficient-table tie made the leading coefficient formal."""


@dataclass(frozen=True)
class AsymptoticCharacterization:
    """Leading-order summary of one system's outage decay.

    diversity_order: decay exponent of the outage probability in the mean
    SNR; coding_gain: CG such that OP ~ (snr_bar * CG)^(-DO), or None
    when a coefficient tie leaves only the DO meaningful; regime: which
    side of the case split produced the numbers; dominant_terms: names of
    the coefficient-table rows that build the leading coefficient.
    """

    diversity_order: float
    coding_gain: float | None
    regime: str
    dominant_terms: tuple[str, ...]


def _primary_case1(params: SystemParams, t1: float) -> bool:
    ratio = math.inf if params.alpha == 1.0 else params.alpha / (1.0 - params.alpha)
    return t1 <= ratio


def _secondary_case1(params: SystemParams, t1: float) -> bool:
    ratio = math.inf if params.alpha == 0.0 else (1.0 - params.alpha) / params.alpha
    return t1 <= ratio


def _require_live_relay(params: SystemParams) -> None:
    if params.rho >= 1.0:
        raise ValueError(
            "rho must be < 1: at rho = 1 the decode branch gets no power and "
            "the relay-path coefficients are undefined")


def _require_secondary_domain(params: SystemParams) -> None:
    if not 0.0 < params.rho < 1.0:
        raise ValueError(
            f"rho must lie strictly inside (0,1) for secondary asymptotics, got {params.rho}")
    if params.alpha >= 1.0:
        raise ValueError(
            "alpha must be < 1: the secondary signal gets no power at alpha = 1")


def _is_rayleigh(params: SystemParams) -> bool:
    return all(abs(link.m - 1.0) <= TIE_TOL for link in params.links)


def _require_rayleigh(params: SystemParams) -> None:
    if not _is_rayleigh(params):
        figures = tuple(link.m for link in params.links)
        raise ValueError(f"all five fading figures must equal 1, got {figures}")


def primary_op_approx(params: SystemParams) -> float:
    """Closed-form approximation of the primary outage probability.

    Replaces the relayed contribution to the combiner by its infinite
    second-hop-gain limit alpha/(1-alpha).  When the power share covers
    the whole residual requirement (T1 <= alpha/(1-alpha)) only the
    joint decode/direct failure term survives; otherwise a direct-link
    shortfall term is added.  Tight across the whole SNR range when the
    share is below the boundary, increasingly optimistic above it.
    """
    _require_live_relay(params)
    thr = derive_thresholds(params)
    value = primary_i1(params)
    if not _primary_case1(params, thr.t1):
        l0, l1 = params.links[0], params.links[1]
        rem = thr.t1 - params.alpha / (1.0 - params.alpha)
        decode = 1.0 - regularized_lower_gamma(l1.m, thr.theta1 / l1.omega)
        value += decode * regularized_lower_gamma(l0.m, rem / thr.psi0)
    return min(1.0, max(0.0, value))


def _coeff_primary_relay(params: SystemParams, t0: float, t1: float) -> float:
    # joint decode-failure x direct-failure coefficient at order
    # snr_bar^-(m0+m1)
    l0, l1 = params.links[0], params.links[1]
    one_mu = 1.0 + params.mu
    split = (1.0 - params.rho + params.mu) / (l1.omega * (1.0 - params.rho))
    return (t0 ** l0.m * t1 ** l1.m * (one_mu / l0.omega) ** l0.m * split ** l1.m
            / (l0.m * l1.m * gamma_complete(l0.m) * gamma_complete(l1.m)))


def _coeff_primary_direct(params: SystemParams, t1: float) -> float:
    # direct-link shortfall coefficient at order snr_bar^-m0; only
    # reachable with alpha < 1 since the case test sends alpha = 1 the
    # other way
    l0 = params.links[0]
    rem = t1 - params.alpha / (1.0 - params.alpha)
    return (rem * (1.0 + params.mu) / l0.omega) ** l0.m / (l0.m * gamma_complete(l0.m))


def primary_op_asymptotic(params: SystemParams) -> float:
    """Leading-order power law of the primary outage probability.

    Returns the raw coefficient * snr_bar^-DO value without clipping, so
    the pure power-law slope is observable at any SNR.
    """
    _require_live_relay(params)
    thr = derive_thresholds(params)
    l0, l1 = params.links[0], params.links[1]
    if _primary_case1(params, thr.t1):
        coeff = _coeff_primary_relay(params, thr.t0, thr.t1)
        order = l0.m + l1.m
    else:
        coeff = _coeff_primary_direct(params, thr.t1)
        order = l0.m
    return coeff * params.snr_bar ** (-order)


def primary_do_cg(params: SystemParams) -> AsymptoticCharacterization:
    """Diversity order and coding gain of the primary system."""
    _require_live_relay(params)
    thr = derive_thresholds(params)
    l0, l1 = params.links[0], params.links[1]
    if _primary_case1(params, thr.t1):
        order = l0.m + l1.m
        coeff = _coeff_primary_relay(params, thr.t0, thr.t1)
        regime = "PrimaryCase1"
        terms = ("C_p1",)
    else:
        order = l0.m
        coeff = _coeff_primary_direct(params, thr.t1)
        regime = "PrimaryCase2"
        terms = ("C_p2",)
    return AsymptoticCharacterization(
        diversity_order=order,
        coding_gain=coeff ** (-1.0 / order),
        regime=regime,
        dominant_terms=terms,
    )


def secondary_op_approx(params: SystemParams) -> float:
    """Closed-form approximation of the secondary outage probability.

    Assembles the decode-failure term, the both-routes-blocked term in
    its saturated form, and the cancellation-route failure term with the
    small-argument lower-Gamma limit taken inside the remaining integral.
    The last term uses the analytically continued upper incomplete Gamma,
    which stays finite for m1 = m3, so this form is usable everywhere the
    power-law coefficient is not.
    """
    _require_secondary_domain(params)
    thr = derive_thresholds(params)
    l1, l3, l4 = params.links[1], params.links[3], params.links[4]
    j1 = regularized_lower_gamma(l1.m, thr.theta1 / l1.omega)
    f4 = regularized_lower_gamma(l4.m, thr.theta2 / l4.omega)
    scale = thr.theta2 / (l3.omega * params.rho * params.eta * (1.0 - params.alpha))
    j3 = ((1.0 - f4) * scale ** l3.m
          * upper_incomplete_gamma_general(l1.m - l3.m, thr.theta1 / l1.omega)
          / (gamma_complete(l1.m) * l3.m * gamma_complete(l3.m) * l1.omega ** l3.m))
    if _secondary_case1(params, thr.t1):
        value = j1 + j3
    else:
        value = j1 + (1.0 - j1) * f4 + j3
    return min(1.0, max(0.0, value))


def _coeff_s1(params: SystemParams, t1: float) -> float:
    l1 = params.links[1]
    split = t1 * (1.0 - params.rho + params.mu) / ((1.0 - params.rho) * l1.omega)
    return split ** l1.m / (l1.m * gamma_complete(l1.m))


def _coeff_s2(params: SystemParams, t1: float) -> float:
    l1, l3 = params.links[1], params.links[3]
    harvested = t1 * (1.0 + params.mu) / (l3.omega * params.rho * params.eta
                                          * (1.0 - params.alpha))
    return (gamma_complete(l1.m - l3.m) * harvested ** l3.m
            / (gamma_complete(l1.m) * l3.m * gamma_complete(l3.m) * l1.omega ** l3.m))


def _coeff_s3(params: SystemParams, t1: float) -> float:
    l4 = params.links[4]
    return (t1 * (1.0 + params.mu) / l4.omega) ** l4.m / (l4.m * gamma_complete(l4.m))


_SECONDARY_COEFFS = {"A_s1": _coeff_s1, "A_s2": _coeff_s2,
                     "B_s1": _coeff_s1, "B_s2": _coeff_s2, "B_s3": _coeff_s3}


def _secondary_rows(params: SystemParams, case1: bool) -> tuple[str, ...]:
    m1, m3, m4 = params.links[1].m, params.links[3].m, params.links[4].m
    eq13 = abs(m1 - m3) <= TIE_TOL
    if case1:
        if eq13:
            return ("A_s1", "A_s2")
        return ("A_s1",) if m1 < m3 else ("A_s2",)
    eq14 = abs(m1 - m4) <= TIE_TOL
    eq34 = abs(m3 - m4) <= TIE_TOL
    if eq13 and eq14:
        return ("B_s1", "B_s2", "B_s3")
    if eq13 and m1 < m4:
        return ("B_s1", "B_s2")
    if eq14 and m1 < m3:
        return ("B_s1", "B_s3")
    if eq34 and m3 < m1:
        return ("B_s2", "B_s3")
    if m1 < m3 and m1 < m4:
        return ("B_s1",)
    if m3 < m1 and m3 < m4:
        return ("B_s2",)
    return ("B_s3",)


def _secondary_table(params: SystemParams, t1: float):
    """Case flag, diversity order, dominant row names, and the summed
    coefficient (None when the printed rows are formal)."""
    m1, m3, m4 = params.links[1].m, params.links[3].m, params.links[4].m
    case1 = _secondary_case1(params, t1)
    order = min(m1, m3) if case1 else min(m1, m3, m4)
    rows = _secondary_rows(params, case1)
    # the Gamma(m1 - m3) factor only matters when the near-tied pair sits
    # at the leading order; a strictly smaller m4 keeps it subdominant
    shielded = (not case1) and m4 < min(m1, m3) - SINGULAR_TOL
    if abs(m1 - m3) < SINGULAR_TOL and not shielded:
        return case1, order, rows, None
    coeff = sum(_SECONDARY_COEFFS[name](params, t1) for name in rows)
    return case1, order, rows, coeff


def secondary_op_asymptotic(params: SystemParams) -> float:
    """Leading-order power law of the secondary outage probability.

    Near an m1 = m3 tie at the leading order the coefficient is formal;
    a CoefficientSingularityWarning is emitted and the closed-form
    approximation is returned instead of a power-law value.
    """
    _require_secondary_domain(params)
    thr = derive_thresholds(params)
    case1, order, rows, coeff = _secondary_table(params, thr.t1)
    if coeff is None:
        warnings.warn(
            f"m1 ~ m3 tie makes the {'+'.join(rows)} coefficient formal; "
            "returning the closed-form approximation instead",
            CoefficientSingularityWarning, stacklevel=2)
        return secondary_op_approx(params)
    return coeff * params.snr_bar ** (-order)


def secondary_do_cg(params: SystemParams) -> AsymptoticCharacterization:
    """Diversity order and coding gain of the secondary system.

    For all-Rayleigh inputs the tied rows collapse to known finite sums
    (the divergent complete-Gamma factor carries the conventional value
    1), so a proper coding gain is reported there; for other ties only
    the diversity order is meaningful and coding_gain is None.
    """
    _require_secondary_domain(params)
    thr = derive_thresholds(params)
    case1, order, rows, coeff = _secondary_table(params, thr.t1)
    regime = "SecondaryCase1" if case1 else "SecondaryCase2"
    if _is_rayleigh(params):
        b1, b3, b4 = (params.links[1].beta, params.links[3].beta,
                      params.links[4].beta)
        total = (thr.t1 * (1.0 - params.rho + params.mu) / (b1 * (1.0 - params.rho))
                 + thr.t1 * (1.0 + params.mu)
                 / (params.rho * params.eta * b1 * b3 * (1.0 - params.alpha)))
        if not case1:
            total += thr.t1 * (1.0 + params.mu) / b4
        return AsymptoticCharacterization(
            diversity_order=1.0, coding_gain=1.0 / total,
            regime=regime, dominant_terms=rows)
    if coeff is None:
        warnings.warn(
            f"m1 ~ m3 tie makes the {'+'.join(rows)} coefficient formal; "
            "reporting the diversity order only",
            CoefficientSingularityWarning, stacklevel=2)
        return AsymptoticCharacterization(
            diversity_order=order, coding_gain=None,
            regime=regime, dominant_terms=rows)
    return AsymptoticCharacterization(
        diversity_order=order, coding_gain=coeff ** (-1.0 / order),
        regime=regime, dominant_terms=rows)


def rayleigh_primary_op(params: SystemParams) -> float:
    """Primary outage approximation specialised to all-Rayleigh fading.

    Same case structure as primary_op_approx with every incomplete Gamma
    collapsed to an exponential.
    """
    _require_rayleigh(params)
    _require_live_relay(params)
    thr = derive_thresholds(params)
    b0, b1 = params.links[0].beta, params.links[1].beta
    value = (-math.expm1(-thr.theta0 / b0)) * (-math.expm1(-thr.theta1 / b1))
    if not _primary_case1(params, thr.t1):
        rem = thr.t1 - params.alpha / (1.0 - params.alpha)
        value += math.exp(-thr.theta1 / b1) * (-math.expm1(-rem / thr.psi0))
    return min(1.0, max(0.0, value))


def rayleigh_secondary_op(params: SystemParams) -> float:
    """Secondary outage approximation specialised to all-Rayleigh fading.

    The cancellation-route failure term keeps its exponential-integral
    factor E1(theta1/beta1); with it the value matches the general
    closed-form approximation at m = 1 to rounding error.
    """
    _require_rayleigh(params)
    _require_secondary_domain(params)
    thr = derive_thresholds(params)
    b1, b3, b4 = (params.links[1].beta, params.links[3].beta,
                  params.links[4].beta)
    e1 = upper_incomplete_gamma_general(0.0, thr.theta1 / b1)
    j3 = (math.exp(-thr.theta2 / b4) * thr.theta2 * e1
          / (b1 * b3 * params.rho * params.eta * (1.0 - params.alpha)))
    if _secondary_case1(params, thr.t1):
        value = -math.expm1(-thr.theta1 / b1) + j3
    else:
        value = -math.expm1(-(thr.theta1 / b1 + thr.theta2 / b4)) + j3
    return min(1.0, max(0.0, value))
