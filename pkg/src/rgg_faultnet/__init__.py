"""Connectivity of random geometric graphs under random node faults."""

__version__ = "0.1.0"

from .analytics import (  # noqa: E402
    approx_breakdown,
    approx_breakdown_rayleigh_delta,
    asymptotic_breakdown,
    asymptotic_consistency_check,
    beta_threshold,
    critical_radius,
    epsilon_threshold,
    epsilon_threshold_cor1,
)
from .connmodel import (  # noqa: E402
    HardDisk,
    RayleighSISO,
    RescaledProfile,
    connect_probability,
    constant_C,
    moment,
    validate_conditions,
)
from .faultsim import (  # noqa: E402
    BreakdownEstimate,
    FaultModel,
    estimate_breakdown,
    estimate_conditional,
    estimate_fixed_points,
    lemma1_bounds,
)
from .geometry import Metric, PointSet, distance, sample_poisson, sample_uniform  # noqa: E402
from .graphcore import GraphInstance, is_connected, sample_graph  # noqa: E402
