"""Closed-form probabilities, amplification and SNR for every measurement scheme.

Conventions
-----------
``rounds`` is the number of passes through the interferometer; ``math.inf``
means unlimited recycling. Losses on the way back into the interferometer are
booked to the round that follows. After the last round the H light still
leaving the bright port is reported as ``residual``, so with ``loss == 0``::

    P_d + Gamma + residual == 1

and with external loss ``gamma_external`` is added to the left side.

The SNR enhancement ``snr_enhancement = sqrt(P_d * eta)`` is taken relative to a
conventional measurement with SNR ``2 theta sqrt(N)``. ``sensitivity`` is the
shot-noise ratio ``dtheta~ / theta~`` with the exact amplified angle
``theta~ = asin(sqrt(P_V))``; ``sensitivity_paper`` is the closed form
``1 / (2 theta sqrt(eta P_d N))`` that linearizes ``theta~``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DegenerateDarkPort, ValidationError

INFINITE = math.inf
DEGENERATE_TOL = 1e-15
POWER_FLOOR = 1e-300
PV_TOL = 1e-12


class Scheme(str, enum.Enum):
    NO_RECYCLE = "none"
    SCHEME_I = "scheme1"
    SCHEME_II = "scheme2"

    @classmethod
    def parse(cls, value) -> "Scheme":
        if isinstance(value, cls):
            return value
        aliases = {"norecycle": "none", "no_recycle": "none", "psm": "none",
                   "i": "scheme1", "1": "scheme1", "ii": "scheme2", "2": "scheme2"}
        key = str(value).strip().lower()
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise ValidationError(
                f"scheme must be one of {[s.value for s in cls]}, got {value!r}"
            ) from None


def parse_rounds(value) -> float | int:
    """Accept a positive integer or 'inf'."""
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("inf", "infinite", "infinity"):
            return INFINITE
        try:
            value = float(text)
        except ValueError:
            raise ValidationError(f"rounds_n must be a positive integer or 'inf', got {value!r}") from None
    if isinstance(value, float):
        if math.isinf(value) and value > 0:
            return INFINITE
        if not value.is_integer():
            raise ValidationError(f"rounds_n must be an integer, got {value!r}")
        value = int(value)
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise ValidationError(f"rounds_n must be >= 1, got {value!r}")
    return value


@dataclass(frozen=True)
class ExperimentParams:
    theta_rad: float
    beta_rad: float
    loss_L: float = 0.0
    epsilon_rad: float = 0.0
    photons_N: float = 1e6
    rounds_n: float | int = INFINITE
    scheme: Scheme = Scheme.SCHEME_I

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme.parse(self.scheme))
        object.__setattr__(self, "rounds_n", parse_rounds(self.rounds_n))
        for name in ("theta_rad", "beta_rad", "epsilon_rad", "loss_L", "photons_N"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(f"{name} must be finite")
        if not 0.0 <= self.loss_L < 1.0:
            raise ValidationError("loss_L must be in [0,1)")
        if self.photons_N <= 0:
            raise ValidationError("photons_N must be > 0")


@dataclass(frozen=True)
class MagnetometerParams:
    verdet_V: float
    length_l: float
    field_B: float

    def __post_init__(self):
        if self.length_l <= 0:
            raise ValidationError("length_l must be > 0")


def angle_from_field(m: MagnetometerParams) -> float:
    """Faraday rotation angle V * B * l in radians."""
    return m.verdet_V * m.field_B * m.length_l


@dataclass(frozen=True)
class RecyclingSummary:
    scheme: Scheme
    rounds: float | int
    p_d1: float
    p_c1: float
    gamma_1: float
    P_d: float
    Gamma: float
    gamma_external: float
    residual: float
    P_V: float
    theta_tilde: float
    eta: float
    aux: float | None
    kappa_n: float | None
    snr_enhancement: float
    sensitivity: float
    sensitivity_paper: float


# --- first-round quantities --------------------------------------------------

def dark_probability(theta: float, beta: float) -> float:
    """(1 - cos(theta) cos(beta)) / 2, written without cancellation."""
    return math.sin(theta / 2) ** 2 + math.cos(theta) * math.sin(beta / 2) ** 2


def scheme1_first_round(theta: float, beta: float) -> tuple[float, float, float]:
    """(p_d1, p_c1, gamma_1) for one pass with a polarizer on the bright port."""
    c = math.cos(theta)
    p_d1 = dark_probability(theta, beta)
    p_c1 = (1 + 2 * c * math.cos(beta) + c * c) / 4
    gamma_1 = math.sin(theta) ** 2 / 4
    return p_d1, p_c1, gamma_1


def scheme2_weights(theta: float, beta: float) -> tuple[float, float, float]:
    """(D_-, D_+, 1 - D_+) for light that re-enters after the internal return."""
    c2 = math.cos(theta) ** 2
    s2 = math.sin(theta) ** 2
    d_minus = (s2 + 4 * c2 * math.sin(beta) ** 2) / 4
    d_plus = (1 + c2 * c2 + 2 * c2 * math.cos(2 * beta)) / 4
    one_minus = d_minus + s2 * (2 + c2) / 4
    return d_minus, d_plus, one_minus


def _power(one_minus_r: float, m: float) -> float:
    """(1 - q)**m in log space, flushed to 0 below POWER_FLOOR."""
    if m == 0:
        return 1.0
    if one_minus_r >= 1.0:
        return 0.0
    val = math.exp(m * math.log1p(-one_minus_r)) if one_minus_r > 0 else 1.0
    return 0.0 if val < POWER_FLOOR else val


def _partial_sum(one_minus_r: float, m: float) -> float:
    """sum_{k<m} r**k for r = 1 - q, with m possibly infinite."""
    if m == 0:
        return 0.0
    if one_minus_r <= 0:
        if math.isinf(m):
            raise DegenerateDarkPort("recycled light never leaves the loop")
        return float(m)
    if one_minus_r >= 1.0:
        return 1.0
    if math.isinf(m):
        return 1.0 / one_minus_r
    return -math.expm1(m * math.log1p(-one_minus_r)) / one_minus_r


def snr_enhancement(P_d: float, eta: float) -> float:
    """SNR relative to conventional measurement, sqrt(P_d * eta)."""
    return math.sqrt(P_d * eta)


def _amplified_angle(P_V: float) -> float:
    if P_V < -PV_TOL or P_V > 1 + PV_TOL:
        raise ArithmeticError(f"P_V={P_V!r} outside [0, 1]")
    return math.asin(math.sqrt(min(max(P_V, 0.0), 1.0)))


def _finish(params: ExperimentParams, *, p_d1, p_c1, gamma_1, P_d, Gamma,
            gamma_external, residual, P_V, eta, aux, kappa_n) -> RecyclingSummary:
    theta_tilde = _amplified_angle(P_V)
    N = params.photons_N
    shot = 1.0 / (2.0 * math.sqrt(P_d * N))
    sens = shot / theta_tilde if theta_tilde > 0 else math.inf
    lin = 2.0 * abs(params.theta_rad) * math.sqrt(eta * P_d * N)
    return RecyclingSummary(
        scheme=params.scheme,
        rounds=params.rounds_n,
        p_d1=p_d1,
        p_c1=p_c1,
        gamma_1=gamma_1,
        P_d=P_d,
        Gamma=Gamma,
        gamma_external=gamma_external,
        residual=residual,
        P_V=min(max(P_V, 0.0), 1.0),
        theta_tilde=theta_tilde,
        eta=eta,
        aux=aux,
        kappa_n=kappa_n,
        snr_enhancement=snr_enhancement(P_d, eta),
        sensitivity=sens,
        sensitivity_paper=1.0 / lin if lin > 0 else math.inf,
    )


def no_recycle(params: ExperimentParams) -> RecyclingSummary:
    """Single pass with postselection on the dark port and nothing recycled.

    ``residual`` holds the light leaving the bright port (discarded).
    """
    theta, beta = params.theta_rad, params.beta_rad
    p_d1, p_c1, gamma_1 = scheme1_first_round(theta, beta)
    if p_d1 < DEGENERATE_TOL:
        raise DegenerateDarkPort(f"p_d1={p_d1:.3g}: dark port is empty")
    return _finish(
        params, p_d1=p_d1, p_c1=p_c1, gamma_1=gamma_1, P_d=p_d1, Gamma=0.0,
        gamma_external=0.0, residual=1.0 - p_d1,
        P_V=math.sin(theta) ** 2 / (4 * p_d1), eta=1 / (4 * p_d1),
        aux=None, kappa_n=None,
    )


def scheme1(params: ExperimentParams) -> RecyclingSummary:
    """External recycling: bright-port H light is routed back to port a.

    ``aux`` is the per-round survival y = (1 - L) p_c1.
    """
    theta, beta, L, n = params.theta_rad, params.beta_rad, params.loss_L, params.rounds_n
    p_d1, p_c1, gamma_1 = scheme1_first_round(theta, beta)
    y = (1 - L) * p_c1
    q = p_d1 + gamma_1 + L * p_c1
    if math.isinf(n) and q < DEGENERATE_TOL:
        raise DegenerateDarkPort("1 - (1-L) p_c1 vanishes: the photon circulates forever")
    if p_d1 < DEGENERATE_TOL:
        raise DegenerateDarkPort(f"p_d1={p_d1:.3g}: dark port is empty")
    total = _partial_sum(q, n)
    P_d = p_d1 * total
    return _finish(
        params, p_d1=p_d1, p_c1=p_c1, gamma_1=gamma_1, P_d=P_d,
        Gamma=gamma_1 * total,
        gamma_external=L * p_c1 * _partial_sum(q, n - 1),
        residual=p_c1 * _power(q, n - 1),
        P_V=total * math.sin(theta) ** 2 / (4 * P_d),
        eta=1 / (4 * p_d1),
        aux=y, kappa_n=None,
    )


def scheme2(params: ExperimentParams) -> RecyclingSummary:
    """Internal recycling back through the interferometer arms.

    ``aux`` is x = cos^2(theta) p_c1 / kappa_n (chi_n for finite n), and
    ``kappa_n = (1 - D_+) / (1 - D_+**(n-1))`` (``None`` for a single round).
    """
    theta, beta, n = params.theta_rad, params.beta_rad, params.rounds_n
    p_d1, p_c1, gamma_1 = scheme1_first_round(theta, beta)
    d_minus, d_plus, q = scheme2_weights(theta, beta)
    if math.isinf(n) and q < DEGENERATE_TOL:
        raise DegenerateDarkPort("1 - D_+ vanishes: the photon circulates forever")
    inv_kappa = _partial_sum(q, n - 1)
    P_d = p_d1 + p_c1 * d_minus * inv_kappa
    if P_d < DEGENERATE_TOL:
        raise DegenerateDarkPort(f"P_d={P_d:.3g}: dark port is empty")
    c2, s2 = math.cos(theta) ** 2, math.sin(theta) ** 2
    chi = c2 * p_c1 * inv_kappa
    eta = (1 + chi) / (4 * P_d)
    return _finish(
        params, p_d1=p_d1, p_c1=p_c1, gamma_1=gamma_1, P_d=P_d,
        Gamma=gamma_1 + s2 * (2 + c2) / 4 * p_c1 * inv_kappa,
        gamma_external=0.0,
        residual=p_c1 * _power(q, n - 1),
        P_V=eta * s2, eta=eta, aux=chi,
        kappa_n=1 / inv_kappa if inv_kappa > 0 else None,
    )


def evaluate(params: ExperimentParams) -> RecyclingSummary:
    if params.scheme is Scheme.NO_RECYCLE:
        return no_recycle(params)
    if params.scheme is Scheme.SCHEME_I:
        return scheme1(params)
    return scheme2(params)


def conventional_snr(theta: float, photons: float) -> float:
    """Reference SNR 2 theta sqrt(N) that ``snr_enhancement`` is measured against."""
    return 2 * abs(theta) * math.sqrt(photons)
