"""Shared parameter builders for the test suite."""

from crn_outage.model import LinkFading, SystemParams, snr_from_db

# Baseline fading profile used across the suite: a weak direct link
# (m0 = 0.6), good relay-path links, and a weak PT->SR side link.
BASELINE_M = (0.6, 1.5, 1.5, 1.5, 0.6)
BASELINE_BETA = (1.0, 1.5, 1.5, 1.5, 1.0)


def make_params(snr_db=10.0, rho=0.5, alpha=0.5, eta=1.0, mu=1.0, r0=1.0,
                m=BASELINE_M, beta=BASELINE_BETA, snr_bar=None):
    links = tuple(LinkFading(m=mj, beta=bj) for mj, bj in zip(m, beta))
    if snr_bar is None:
        snr_bar = snr_from_db(snr_db)
    return SystemParams(snr_bar=snr_bar, rho=rho, alpha=alpha, eta=eta,
                        mu=mu, r0=r0, links=links)
