"""Recycled postselected measurement for Faraday-rotation magnetometry.

Closed-form results (``analytic``), a round-by-round pulse-train oracle
(``oracle``) and a photon-counting Monte Carlo (``mc``) for a Mach-Zehnder
interferometer that postselects on its dark port and recycles bright-port light.
"""

__version__ = "0.1.0"

from .analytic import (  # noqa: E402
    INFINITE,
    ExperimentParams,
    MagnetometerParams,
    RecyclingSummary,
    Scheme,
    angle_from_field,
    evaluate,
)
from .pulse import DEFAULT_BACKEND  # noqa: E402

__all__ = [
    "INFINITE",
    "DEFAULT_BACKEND",
    "ExperimentParams",
    "MagnetometerParams",
    "RecyclingSummary",
    "Scheme",
    "angle_from_field",
    "evaluate",
]
