"""Outage analysis for an overlay cognitive radio network with a
power-splitting energy-harvesting relay.

The secondary transmitter harvests RF energy from the primary
transmission, relays the primary signal with a share of the harvested
power, and uses the rest for its own traffic.  This package provides a
Monte-Carlo simulator, exact quadrature evaluators, and high-SNR
asymptotics (diversity order / coding gain) for the outage probability
of both systems under Nakagami-m fading, plus a CSV-emitting CLI.
"""

from .model import (
    LINK_NAMES,
    LinkFading,
    SystemParams,
    derive_thresholds,
    snr_from_db,
)
from .montecarlo import OutageEstimate, SimulationConfig, estimate_outage
from .analytic_exact import (
    QuadratureError,
    QuadratureSpec,
    primary_op_exact,
    secondary_op_exact,
)
from .asymptotic import (
    AsymptoticCharacterization,
    CoefficientSingularityWarning,
    primary_do_cg,
    primary_op_approx,
    primary_op_asymptotic,
    rayleigh_primary_op,
    rayleigh_secondary_op,
    secondary_do_cg,
    secondary_op_approx,
    secondary_op_asymptotic,
)

__version__ = "0.1.0"

__all__ = [
    "LINK_NAMES",
    "LinkFading",
    "SystemParams",
    "derive_thresholds",
    "snr_from_db",
    "OutageEstimate",
    "SimulationConfig",
    "estimate_outage",
    "QuadratureError",
    "QuadratureSpec",
    "primary_op_exact",
    "secondary_op_exact",
    "AsymptoticCharacterization",
    "CoefficientSingularityWarning",
    "primary_do_cg",
    "primary_op_approx",
    "primary_op_asymptotic",
    "rayleigh_primary_op",
    "rayleigh_secondary_op",
    "secondary_do_cg",
    "secondary_op_approx",
    "secondary_op_asymptotic",
    "__version__",
]
