"""Scenario parameters, derived thresholds, instantaneous capacities, and
the Boolean outage events for the primary and secondary systems.

The network: a primary transmitter (PT) talks to a primary receiver (PR).
A secondary transmitter (ST) overhears the first transmission phase,
splits the received power (fraction ``rho`` harvested, the rest decoded),
and in the second phase spends a share ``alpha`` of the harvested power on
relaying the primary signal and ``1 - alpha`` on its own signal to the
secondary receiver (SR).  Five links matter, indexed 0..4:

    0: PT -> PR    1: PT -> ST    2: ST -> PR    3: ST -> SR    4: PT -> SR

Each squared channel gain g_j follows a Gamma law with shape m_j and
scale omega_j = beta_j / m_j (Nakagami-m power fading).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

__all__ = [
    "LinkFading",
    "SystemParams",
    "DerivedThresholds",
    "ChannelDraw",
    "CapacitySet",
    "LINK_NAMES",
    "snr_from_db",
    "derive_thresholds",
    "compute_capacities",
    "primary_outage_event",
    "secondary_outage_event",
]

LINK_NAMES = ("PT-PR", "PT-ST", "ST-PR", "ST-SR", "PT-SR")


def snr_from_db(snr_db: float) -> float:
    """Mean-SNR dB -> linear conversion, done exactly once at the boundary."""
    return math.pow(10.0, snr_db / 10.0)


@dataclass(frozen=True)
class LinkFading:
    """Nakagami-m profile of one link.

    m: fading figure (>= 0.5); beta: mean channel power E[g]; the Gamma
    scale omega = beta / m is derived.
    """

    m: float
    beta: float

    def __post_init__(self):
        if self.m < 0.5:
            raise ValueError(f"Nakagami figure must be >= 0.5, got m={self.m}")
        if self.beta <= 0.0:
            raise ValueError(f"channel power must be positive, got beta={self.beta}")

    @property
    def omega(self) -> float:
        return self.beta / self.m


@dataclass(frozen=True)
class SystemParams:
    """Every scenario knob in one immutable bundle.

    snr_bar: mean transmit SNR (linear); rho: power-splitting coefficient
    in [0,1]; alpha: power-sharing coefficient in [0,1]; eta: energy
    conversion efficiency in (0,1]; mu: conversion-noise variance ratio
    (>= 0); r0: target rate in bits/s/Hz; links: the five LinkFading
    profiles in link-index order; phase_duration: length of one phase,
    fixed to 1 since it cancels in the harvested-power expression.
    """

    snr_bar: float
    rho: float
    alpha: float
    eta: float
    mu: float
    r0: float
    links: tuple[LinkFading, ...]
    phase_duration: float = 1.0

    def __post_init__(self):
        if self.snr_bar <= 0.0:
            raise ValueError(f"snr_bar must be positive, got {self.snr_bar}")
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"rho must lie in [0,1], got {self.rho}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0,1], got {self.alpha}")
        if not 0.0 < self.eta <= 1.0:
            raise ValueError(f"eta must lie in (0,1], got {self.eta}")
        if self.mu < 0.0:
            raise ValueError(f"mu must be nonnegative, got {self.mu}")
        if self.r0 <= 0.0:
            raise ValueError(f"r0 must be positive, got {self.r0}")
        object.__setattr__(self, "links", tuple(self.links))
        if len(self.links) != 5:
            raise ValueError(f"exactly 5 links required, got {len(self.links)}")


@dataclass(frozen=True)
class DerivedThresholds:
    """SNR thresholds implied by the target rate.

    t0/t1 are the rate thresholds for full and half pre-log capacities;
    theta0..theta2 are the matching gain thresholds; psi0 is the scale of
    the direct-link SNR gamma_bar * g0 / (1 + mu).
    """

    t0: float
    t1: float
    theta0: float
    theta1: float
    theta2: float
    psi0: float


@dataclass(frozen=True)
class ChannelDraw:
    """One realization of the five squared channel gains."""

    g0: float
    g1: float
    g2: float
    g3: float
    g4: float

    def __post_init__(self):
        for name in ("g0", "g1", "g2", "g3", "g4"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"channel gains must be nonnegative, got {name}={getattr(self, name)}")


@dataclass(frozen=True)
class CapacitySet:
    """Instantaneous capacities (bits/s/Hz) and the PR component SNRs.

    All second-phase and split-phase capacities carry the 1/2 pre-log of a
    two-phase protocol; c_pr_direct is the one-phase direct transmission
    and carries a full pre-log.
    """

    c_sr_1: float
    c_st_1: float
    c_pr_1: float
    c_pr_relay: float
    c_sr_no_ic: float
    c_sr_ic: float
    c_pr_direct: float
    gamma_pr_1: float
    gamma_pr_2: float


def derive_thresholds(params: SystemParams) -> DerivedThresholds:
    """Rate thresholds T0/T1 and the gain thresholds they induce.

    theta1 is the decode threshold seen by ST after power splitting; at
    rho = 1 nothing is left for decoding and theta1 is the +inf sentinel.
    """
    t0 = math.pow(2.0, params.r0) - 1.0
    t1 = math.pow(2.0, 2.0 * params.r0) - 1.0
    one_mu = 1.0 + params.mu
    theta0 = t0 * one_mu / params.snr_bar
    if params.rho == 1.0:
        theta1 = math.inf
    else:
        theta1 = t1 * (1.0 - params.rho + params.mu) / ((1.0 - params.rho) * params.snr_bar)
    theta2 = t1 * one_mu / params.snr_bar
    psi0 = params.snr_bar * params.links[0].omega / one_mu
    return DerivedThresholds(t0=t0, t1=t1, theta0=theta0, theta1=theta1,
                             theta2=theta2, psi0=psi0)


def compute_capacities(draw: ChannelDraw, params: SystemParams) -> CapacitySet:
    """All instantaneous capacities for one channel realization."""
    s = params.snr_bar
    rho = params.rho
    alpha = params.alpha
    one_mu = 1.0 + params.mu

    gamma_pr_1 = s * draw.g0 / one_mu
    c_pr_1 = 0.5 * math.log2(1.0 + gamma_pr_1)
    c_pr_direct = math.log2(1.0 + gamma_pr_1)
    c_sr_1 = 0.5 * math.log2(1.0 + s * draw.g4 / one_mu)

    if rho == 1.0:
        c_st_1 = 0.0
    else:
        c_st_1 = 0.5 * math.log2(1.0 + (1.0 - rho) * s * draw.g1 / (1.0 - rho + params.mu))

    # harvested transmit SNR scale of ST in the second phase
    e_st = s * rho * params.eta * draw.g1

    gamma_pr_2 = alpha * e_st * draw.g2 / ((1.0 - alpha) * e_st * draw.g2 + one_mu)
    c_pr_relay = 0.5 * math.log2(1.0 + gamma_pr_1 + gamma_pr_2)

    own = (1.0 - alpha) * e_st * draw.g3
    c_sr_no_ic = 0.5 * math.log2(1.0 + own / (alpha * e_st * draw.g3 + one_mu))
    c_sr_ic = 0.5 * math.log2(1.0 + own / one_mu)

    return CapacitySet(c_sr_1=c_sr_1, c_st_1=c_st_1, c_pr_1=c_pr_1,
                       c_pr_relay=c_pr_relay, c_sr_no_ic=c_sr_no_ic,
                       c_sr_ic=c_sr_ic, c_pr_direct=c_pr_direct,
                       gamma_pr_1=gamma_pr_1, gamma_pr_2=gamma_pr_2)


def primary_outage_event(draw: ChannelDraw, params: SystemParams) -> bool:
    """True when the primary message fails for this realization.

    If ST decodes the primary message (c_st_1 >= r0) the second phase is
    relayed and PR combines both phases; otherwise PT transmits directly
    and only the direct-link capacity counts.  A capacity exactly equal to
    r0 counts as success (outage is strict '<').
    """
    caps = compute_capacities(draw, params)
    if caps.c_st_1 >= params.r0:
        return caps.c_pr_relay < params.r0
    return caps.c_pr_direct < params.r0


def secondary_outage_event(draw: ChannelDraw, params: SystemParams) -> bool:
    """True when the secondary message fails for this realization.

    Three mutually exclusive failure routes: ST never decodes the primary
    message, so it has nothing to piggyback its own signal on; or SR
    cannot pre-decode the primary signal (c_sr_1 < r0) and fails without
    interference cancellation; or SR pre-decodes it, cancels it, and the
    cleaned link still falls short.
    """
    caps = compute_capacities(draw, params)
    if caps.c_st_1 < params.r0:
        return True
    if caps.c_sr_1 < params.r0:
        return caps.c_sr_no_ic < params.r0
    return caps.c_sr_ic < params.r0
