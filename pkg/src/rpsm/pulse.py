"""Round-by-round propagation of a single pulse through a recycling loop.

The compiled extension ``rpsm._pulse`` is used when it was built; otherwise
the pure-Python twin in ``rpsm._pulse_py`` is loaded. Set ``RPSM_PURE_PYTHON=1``
to force the fallback.

One round: the pulse enters the input ports, passes the interferometer
(``forward``), leaves a dark-port state, loses the V part of the bright port
to the output polarizer, and the remaining H amplitude ``c`` is sent back.
The return optics turn ``c`` into ``entry * c``; the component ``filtered``
is removed (skipped when negative), ``exit_map`` carries the light to the
input ports and ``gain`` scales it. Losses on the return trip are booked to
the round that follows it.
"""

from __future__ import annotations

import os
from typing import NamedTuple

import numpy as np

from . import _pulse_py

if os.environ.get("RPSM_PURE_PYTHON", "") not in ("", "0"):
    _compiled = None
else:
    try:
        from . import _pulse as _compiled
    except ImportError:  # extension not built
        _compiled = None

BACKENDS = {"python": _pulse_py}
if _compiled is not None:
    BACKENDS["compiled"] = _compiled
DEFAULT_BACKEND = "compiled" if _compiled is not None else "python"

UNDERFLOW_FLOOR = 1e-300


class PulseArrays(NamedTuple):
    rounds: int
    dark_h: np.ndarray
    dark_v: np.ndarray
    filter_loss: np.ndarray
    external_loss: np.ndarray
    bright: np.ndarray
    dark_total: float
    filter_loss_total: float
    external_loss_total: float
    dark_v_total: float
    residual: float


def _backend(name):
    try:
        return BACKENDS[name or DEFAULT_BACKEND]
    except KeyError:
        raise ValueError(f"unknown or unavailable backend {name!r}") from None


def propagate(
    forward,
    entry,
    filtered: int,
    exit_map,
    gain: complex,
    n_rounds: int,
    *,
    floor: float = UNDERFLOW_FLOOR,
    keep: bool = True,
    backend: str | None = None,
) -> PulseArrays:
    """Run up to ``n_rounds`` rounds, stopping early once the bright weight
    falls below ``floor``. Per-round arrays are empty when ``keep`` is false."""
    if n_rounds < 1:
        raise ValueError("n_rounds must be >= 1")
    out = _backend(backend).propagate(
        np.asarray(forward, dtype=np.complex128),
        np.asarray(entry, dtype=np.complex128),
        int(filtered),
        np.asarray(exit_map, dtype=np.complex128),
        complex(gain),
        int(n_rounds),
        float(floor),
        bool(keep),
    )
    return PulseArrays(*out)


def rounds_until(
    forward, entry, filtered: int, exit_map, gain: complex, tol: float, max_rounds: int,
    *, backend: str | None = None,
) -> int:
    """Smallest round count after which the bright weight is below ``tol``; -1 if never."""
    return int(
        _backend(backend).rounds_until(
            np.asarray(forward, dtype=np.complex128),
            np.asarray(entry, dtype=np.complex128),
            int(filtered),
            np.asarray(exit_map, dtype=np.complex128),
            complex(gain),
            float(tol),
            int(max_rounds),
        )
    )
