"""Landau-Zener single-photon sources: analytic rates, pulse dynamics and design optimisation."""

__version__ = "0.1.0"

from .model import ChargeBasis, CpbParams, FluxParams, ValidationError  # noqa: E402
from .pulses import PulseSegment, PulseShape, catapult, effective_rise_time  # noqa: E402
from .dynamics import SolverError, SolverOptions, propagate  # noqa: E402

__all__ = [
    "ChargeBasis",
    "CpbParams",
    "FluxParams",
    "PulseSegment",
    "PulseShape",
    "SolverError",
    "SolverOptions",
    "ValidationError",
    "catapult",
    "effective_rise_time",
    "propagate",
]
