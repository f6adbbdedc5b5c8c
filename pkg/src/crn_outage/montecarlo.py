"""Seeded, parallelizable Monte-Carlo estimation of both outage
probabilities.

Trials are laid out in fixed-size chunks; chunk i draws from an
independent substream spawned from (seed, i), and the per-chunk outage
counts are integers, so the reduction is exact and the result depends
only on (trials, seed, batch) - never on the worker count or scheduling.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .model import LinkFading, SystemParams

__all__ = [
    "SimulationConfig",
    "OutageEstimate",
    "sample_gamma_gain",
    "estimate_outage",
]


@dataclass(frozen=True)
class SimulationConfig:
    """Trial count, RNG seed, worker processes, and trials per chunk."""

    trials: int
    seed: int
    workers: int = 1
    batch: int = 100_000

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        if self.batch < 1:
            raise ValueError(f"batch must be >= 1, got {self.batch}")


@dataclass(frozen=True)
class OutageEstimate:
    """Point estimate with normal-approximation 95% interval.

    For p_hat of exactly 0 or 1 the interval is the one-sided rule-of-three
    bound instead, since the normal approximation collapses there.
    """

    p_hat: float
    stderr: float
    ci95_lo: float
    ci95_hi: float
    trials: int
    seed: int


def sample_gamma_gain(link: LinkFading, rng: np.random.Generator) -> float:
    """One squared-gain variate: Gamma(shape m, scale omega)."""
    return float(rng.gamma(link.m, link.omega))


def _event_counts(params: SystemParams, g) -> tuple[int, int]:
    """Outage counts over a block of draws.

    ``g`` is a 5-tuple of equal-length gain arrays in link order.  The
    capacity expressions and the strict-'<'-is-outage tie handling mirror
    ``model.compute_capacities`` / the event predicates term for term.
    """
    s = params.snr_bar
    rho = params.rho
    alpha = params.alpha
    mu = params.mu
    one_mu = 1.0 + mu
    r0 = params.r0
    g0, g1, g2, g3, g4 = g

    gamma_pr_1 = s * g0 / one_mu
    c_pr_direct = np.log2(1.0 + gamma_pr_1)
    if rho == 1.0:
        c_st_1 = np.zeros_like(g1)
    else:
        c_st_1 = 0.5 * np.log2(1.0 + (1.0 - rho) * s * g1 / (1.0 - rho + mu))

    e_st = s * rho * params.eta * g1
    gamma_pr_2 = alpha * e_st * g2 / ((1.0 - alpha) * e_st * g2 + one_mu)
    c_pr_relay = 0.5 * np.log2(1.0 + gamma_pr_1 + gamma_pr_2)

    c_sr_1 = 0.5 * np.log2(1.0 + s * g4 / one_mu)
    own = (1.0 - alpha) * e_st * g3
    c_sr_no_ic = 0.5 * np.log2(1.0 + own / (alpha * e_st * g3 + one_mu))
    c_sr_ic = 0.5 * np.log2(1.0 + own / one_mu)

    st_decodes = c_st_1 >= r0
    primary = np.where(st_decodes, c_pr_relay < r0, c_pr_direct < r0)
    secondary = ~st_decodes | np.where(c_sr_1 < r0, c_sr_no_ic < r0, c_sr_ic < r0)
    return int(np.count_nonzero(primary)), int(np.count_nonzero(secondary))


def _run_chunk(params: SystemParams, size: int, seed_seq: np.random.SeedSequence) -> tuple[int, int]:
    """Draw one chunk of gains from its own substream and count outages."""
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    gains = tuple(rng.gamma(link.m, link.omega, size=size) for link in params.links)
    return _event_counts(params, gains)


def _chunk_job(job) -> tuple[int, int]:
    return _run_chunk(*job)


def _build_estimate(count: int, trials: int, seed: int) -> OutageEstimate:
    p = count / trials
    stderr = math.sqrt(p * (1.0 - p) / trials)
    if count == 0:
        lo, hi = 0.0, min(1.0, 3.0 / trials)
    elif count == trials:
        lo, hi = max(0.0, 1.0 - 3.0 / trials), 1.0
    else:
        lo = max(0.0, p - 1.96 * stderr)
        hi = min(1.0, p + 1.96 * stderr)
    return OutageEstimate(p_hat=p, stderr=stderr, ci95_lo=lo, ci95_hi=hi,
                          trials=trials, seed=seed)


def estimate_outage(params: SystemParams,
                    config: SimulationConfig) -> tuple[OutageEstimate, OutageEstimate]:
    """(primary, secondary) outage estimates over config.trials draws."""
    sizes = [config.batch] * (config.trials // config.batch)
    remainder = config.trials % config.batch
    if remainder:
        sizes.append(remainder)
    children = np.random.SeedSequence(config.seed).spawn(len(sizes))
    jobs = list(zip([params] * len(sizes), sizes, children))

    if config.workers == 1 or len(sizes) == 1:
        results = [_chunk_job(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_chunk_job, jobs))

    primary_count = sum(r[0] for r in results)
    secondary_count = sum(r[1] for r in results)
    return (_build_estimate(primary_count, config.trials, config.seed),
            _build_estimate(secondary_count, config.trials, config.seed))
