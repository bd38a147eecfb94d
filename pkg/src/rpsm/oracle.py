"""Brute-force pulse-train simulation used as ground truth for ``analytic``.

The interferometer and the return optics are assembled from the elementary
joint-space operators in ``interferometer``; the pulse is then propagated
round by round by repeated operator application. No geometric sum or closed
form from ``analytic`` is used here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from . import interferometer as ifm
from . import kernel as K
from . import pulse
from .analytic import ExperimentParams, Scheme
from .errors import EmptyEnsemble, NoConvergence
from .kernel import PolVector

PULSE_PERIOD_S = 1e-3
ROUND_TRIP_S = 10e-9
MAX_CONVERGENCE_ROUNDS = 10_000_000


def rounds_per_pulse(period_s: float = PULSE_PERIOD_S, round_trip_s: float = ROUND_TRIP_S) -> int:
    """Round trips completed before the next pulse arrives (1 ms / 10 ns = 10**5)."""
    return int(round(period_s / round_trip_s))


@dataclass(frozen=True)
class RoundRecord:
    round_j: int
    dark_state: PolVector
    p_dj: float
    loss_j: float
    external_loss_j: float
    bright_amp: complex


@dataclass
class PulseTrainResult:
    scheme: Scheme
    rounds_requested: int
    rounds_simulated: int
    P_d_total: float
    Gamma_total: float
    gamma_external_total: float
    residual: float
    dark_v_total: float
    dark_h: np.ndarray = field(repr=False)
    dark_v: np.ndarray = field(repr=False)
    loss: np.ndarray = field(repr=False)
    external_loss: np.ndarray = field(repr=False)
    bright: np.ndarray = field(repr=False)

    @property
    def records(self) -> list[RoundRecord]:
        return list(self.iter_records())

    def iter_records(self) -> Iterator[RoundRecord]:
        for j in range(len(self.dark_h)):
            h, v = complex(self.dark_h[j]), complex(self.dark_v[j])
            yield RoundRecord(
                round_j=j + 1,
                dark_state=PolVector(h, v),
                p_dj=abs(h) ** 2 + abs(v) ** 2,
                loss_j=float(self.loss[j]),
                external_loss_j=float(self.external_loss[j]),
                bright_amp=complex(self.bright[j]),
            )

    @property
    def p_d(self) -> np.ndarray:
        return np.abs(self.dark_h) ** 2 + np.abs(self.dark_v) ** 2

    @property
    def P_V_mixed(self) -> float:
        return mixed_state_pv(self)

    @property
    def bookkeeping(self) -> float:
        """P_d + Gamma + external loss + residual; 1 up to rounding."""
        return self.P_d_total + self.Gamma_total + self.gamma_external_total + self.residual


def loop_optics(params: ExperimentParams):
    """(forward transfer, return optics) for the configured scheme."""
    forward = ifm.forward_transfer(params.theta_rad, params.beta_rad)
    if params.scheme is Scheme.SCHEME_II:
        back = ifm.internal_return(params.theta_rad, params.beta_rad)
    else:
        back = ifm.external_return(params.loss_L, params.epsilon_rad)
    return forward, back


def _run(params: ExperimentParams, n: int, keep: bool, backend: str | None) -> PulseTrainResult:
    forward, back = loop_optics(params)
    arr = pulse.propagate(
        forward, back.entry, back.filtered, back.exit_map, back.gain, n,
        keep=keep, backend=backend,
    )
    return PulseTrainResult(
        scheme=params.scheme,
        rounds_requested=n,
        rounds_simulated=arr.rounds,
        P_d_total=arr.dark_total,
        Gamma_total=arr.filter_loss_total,
        gamma_external_total=arr.external_loss_total,
        residual=arr.residual,
        dark_v_total=arr.dark_v_total,
        dark_h=arr.dark_h,
        dark_v=arr.dark_v,
        loss=arr.filter_loss,
        external_loss=arr.external_loss,
        bright=arr.bright,
    )


def simulate_scheme1(params: ExperimentParams, n: int, *, keep: bool = True,
                     backend: str | None = None) -> PulseTrainResult:
    """Pulse train with the external recycling circuit (loss L and delay phase epsilon)."""
    if params.scheme is not Scheme.SCHEME_I:
        params = _with_scheme(params, Scheme.SCHEME_I)
    return _run(params, n, keep, backend)


def simulate_scheme2(params: ExperimentParams, n: int, *, keep: bool = True,
                     backend: str | None = None) -> PulseTrainResult:
    """Pulse train returned backwards through the interferometer arms."""
    if params.scheme is not Scheme.SCHEME_II:
        params = _with_scheme(params, Scheme.SCHEME_II)
    return _run(params, n, keep, backend)


def simulate_no_recycle(params: ExperimentParams) -> PulseTrainResult:
    """One pass, no polarizer on the bright port; all bright light is the residual."""
    out = K.joint_apply(
        ifm.forward_transfer(params.theta_rad, params.beta_rad),
        K.joint_basis(ifm.PORT_A, K.H),
    )
    dark = K.port_state(out, ifm.PORT_D)
    bright = K.port_state(out, ifm.PORT_C)
    return PulseTrainResult(
        scheme=Scheme.NO_RECYCLE,
        rounds_requested=1,
        rounds_simulated=1,
        P_d_total=K.norm_sq(dark),
        Gamma_total=0.0,
        gamma_external_total=0.0,
        residual=K.norm_sq(bright),
        dark_v_total=abs(dark.v) ** 2,
        dark_h=np.array([dark.h]),
        dark_v=np.array([dark.v]),
        loss=np.zeros(1),
        external_loss=np.zeros(1),
        bright=np.array([bright.h]),
    )


def simulate(params: ExperimentParams, n: int | None = None, *, keep: bool = True,
             backend: str | None = None) -> PulseTrainResult:
    """Simulate ``params``; ``n`` defaults to ``params.rounds_n``, or one pulse
    period's worth of rounds when that is infinite."""
    if params.scheme is Scheme.NO_RECYCLE:
        return simulate_no_recycle(params)
    if n is None:
        n = rounds_per_pulse() if math.isinf(params.rounds_n) else int(params.rounds_n)
    return _run(params, n, keep, backend)


def mixed_state_pv(result: PulseTrainResult) -> float:
    """Tr(|V><V| rho_d) for the dark-port mixture of per-round states.

    Weighted average over rounds of the V population of each normalized
    state, weights p_dj / P_d.
    """
    if not result.P_d_total > 0:
        raise EmptyEnsemble("no light reached the dark port")
    if len(result.dark_v) == result.rounds_simulated:
        p = result.p_d
        pv = np.zeros_like(p)
        nz = p > 0
        pv[nz] = np.abs(result.dark_v[nz]) ** 2 / p[nz]
        return float(math.fsum(p * pv)) / result.P_d_total
    return result.dark_v_total / result.P_d_total


def direct_dark_state(params: ExperimentParams, j: int) -> PolVector:
    """Dark-port state of round ``j`` from explicit operator powers.

    Independent of the pulse propagation: scheme I uses
    M_- (sqrt(1-L) e^{i eps} M_+)^(j-1) |H>, scheme II uses
    Q_- Q_+^(j-2) M_+ |H> for j >= 2.
    """
    theta, beta = params.theta_rad, params.beta_rad
    m_minus = ifm.single_pass_dark(theta, beta)
    m_plus = ifm.single_pass_bright(theta, beta)
    if j == 1 or params.scheme is Scheme.NO_RECYCLE:
        return m_minus @ K.KET_H
    if params.scheme is Scheme.SCHEME_I:
        g = math.sqrt(1 - params.loss_L) * complex(math.cos(params.epsilon_rad), math.sin(params.epsilon_rad))
        return (m_minus @ K.KET_H).scaled((g * m_plus) ** (j - 1))
    q_minus = ifm.scheme2_dark(theta, beta)
    q_plus = ifm.scheme2_bright(theta, beta)
    return (q_minus @ K.KET_H).scaled(q_plus ** (j - 2) * m_plus)


def convergence_rounds(params: ExperimentParams, tol: float, *, backend: str | None = None,
                       max_rounds: int = MAX_CONVERGENCE_ROUNDS) -> int:
    """Smallest round count n whose residual (bright light still in the loop) is below ``tol``."""
    if tol <= 0:
        raise ValueError("tol must be > 0")
    if params.scheme is Scheme.NO_RECYCLE:
        return 1
    forward, back = loop_optics(params)
    n = pulse.rounds_until(forward, back.entry, back.filtered, back.exit_map, back.gain,
                           tol, max_rounds, backend=backend)
    if n < 0:
        raise NoConvergence(f"residual still >= {tol:g} after {max_rounds} rounds")
    return n


def shared_quantities(result: PulseTrainResult) -> dict[str, float]:
    """Quantities that ``analytic.RecyclingSummary`` also reports."""
    return {
        "P_d": result.P_d_total,
        "Gamma": result.Gamma_total,
        "gamma_external": result.gamma_external_total,
        "residual": result.residual,
        "P_V": mixed_state_pv(result),
    }


def _with_scheme(params: ExperimentParams, scheme: Scheme) -> ExperimentParams:
    from dataclasses import replace

    return replace(params, scheme=scheme)
