"""Optical elements of the Mach-Zehnder interferometer and its single-pass maps.

Every transfer operator is available twice: as a closed-form polarization
operator and as a composition of the elementary joint-space elements
(beam splitters, Faraday rotator, phase shifter, port and polarizer
projectors). The two constructions are checked against each other in the
test suite.

Port numbering in joint vectors: input side a=0, b=1; inside the
interferometer path 1=0, path 2=1; output side c=0, d=1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from . import kernel as K
from .kernel import JointOperator, JointVector, PolOperator

PORT_A, PORT_B = 0, 1
PATH_1, PATH_2 = 0, 1
PORT_C, PORT_D = 0, 1

_R2 = 1 / math.sqrt(2)


def faraday_unitary(theta_rad: float) -> PolOperator:
    """exp(i theta sigma_x) = cos(theta) I + i sin(theta) sigma_x."""
    c, s = math.cos(theta_rad), math.sin(theta_rad)
    return PolOperator(complex(c), 1j * s, 1j * s, complex(c))


def single_pass_dark(theta_rad: float, beta_rad: float) -> PolOperator:
    """Dark-port operator (exp(i theta sigma_x) - exp(i beta)) / 2."""
    return K.scale(
        K.add(faraday_unitary(theta_rad), K.scalar(-cmath.exp(1j * beta_rad))), 0.5
    )


def single_pass_bright_operator(theta_rad: float, beta_rad: float) -> PolOperator:
    """Bright-port operator before the horizontal polarizer."""
    return K.scale(
        K.add(faraday_unitary(theta_rad), K.scalar(cmath.exp(1j * beta_rad))), 0.5
    )


def single_pass_bright(theta_rad: float, beta_rad: float) -> complex:
    """H-to-H bright-port amplitude (cos(theta) + exp(i beta)) / 2."""
    return 0.5 * (math.cos(theta_rad) + cmath.exp(1j * beta_rad))


def scheme2_dark(theta_rad: float, beta_rad: float) -> PolOperator:
    """Dark-port operator for light re-entering after the internal return trip."""
    c = math.cos(theta_rad)
    return K.scale(
        K.add(
            K.scale(faraday_unitary(theta_rad), c),
            K.scalar(-cmath.exp(2j * beta_rad)),
        ),
        0.5,
    )


def scheme2_bright(theta_rad: float, beta_rad: float) -> complex:
    return 0.5 * (math.cos(theta_rad) ** 2 + cmath.exp(2j * beta_rad))


@dataclass(frozen=True)
class ElementSet:
    s1: JointOperator
    s2: JointOperator
    u1: JointOperator
    u2: JointOperator
    m_d: JointOperator
    m_c: JointOperator
    m_h: JointOperator


def elements(theta_rad: float, beta_rad: float) -> ElementSet:
    splitter = K.path_operator(_R2, _R2, _R2, -_R2)
    return ElementSet(
        s1=splitter,
        s2=splitter,
        u1=K.on_port(PATH_1, faraday_unitary(theta_rad)),
        u2=K.on_port(PATH_2, K.scalar(cmath.exp(1j * beta_rad))),
        m_d=K.path_operator(0, 0, 0, 1),
        m_c=K.path_operator(1, 0, 0, 0),
        m_h=K.on_polarization(K.PROJ_H),
    )


def forward_transfer(theta_rad: float, beta_rad: float) -> JointOperator:
    """Input ports (a, b) to output ports (c, d) for one pass: S2 U2 U1 S1."""
    el = elements(theta_rad, beta_rad)
    return K.joint_compose(el.s2, el.u2, el.u1, el.s1)


def compose_first_pass(theta_rad: float, beta_rad: float) -> tuple[PolOperator, complex]:
    """Dark operator and filtered bright amplitude built from the elements."""
    el = elements(theta_rad, beta_rad)
    dark_full = K.joint_compose(el.m_d, el.s2, el.u2, el.u1, el.s1)
    bright_full = K.joint_compose(el.m_h, el.m_c, el.s2, el.u2, el.u1, el.s1)
    dark = K.block(dark_full, PORT_D, PORT_A)
    bright = K.block(bright_full, PORT_C, PORT_A).hh
    return dark, bright


@dataclass(frozen=True)
class ReturnOptics:
    """Route from the filtered bright port back to the input ports.

    A unit H amplitude leaving port c becomes ``entry`` in the intermediate
    basis, the component at ``filtered`` (if any) is removed by a polarizer,
    ``exit_map`` carries the rest to the input ports, and ``gain`` multiplies
    the result (external attenuation and delay phase).
    """

    entry: JointVector
    filtered: int
    exit_map: JointOperator
    gain: complex


def external_return(loss: float, epsilon_rad: float) -> ReturnOptics:
    """External recycling circuit: port c (H) back to port a (H)."""
    return ReturnOptics(
        entry=K.joint_basis(PORT_A, K.H),
        filtered=-1,
        exit_map=K.joint_identity(),
        gain=math.sqrt(1.0 - loss) * cmath.exp(1j * epsilon_rad),
    )


def internal_return(theta_rad: float, beta_rad: float) -> ReturnOptics:
    """Backward trip through the interferometer arms to ports a and b.

    The light passes BS2 in reverse, the Faraday crystal (non-reciprocal, so
    the rotation accumulates with the same sign) and the polarizer on path 1,
    the phase shifter on path 2, then BS1 in reverse.
    """
    el = elements(theta_rad, beta_rad)
    to_arms = K.joint_compose(el.u2, el.u1, K.joint_adjoint(el.s2))
    return ReturnOptics(
        entry=K.joint_apply(to_arms, K.joint_basis(PORT_C, K.H)),
        filtered=K.joint_index(PATH_1, K.V),
        exit_map=K.joint_adjoint(el.s1),
        gain=1 + 0j,
    )


def returned_state(optics: ReturnOptics, amplitude: complex = 1.0) -> JointVector:
    """Joint input-port state produced by ``amplitude`` of H light leaving port c."""
    w = [amplitude * c for c in optics.entry]
    if optics.filtered >= 0:
        w[optics.filtered] = 0j
    v = K.joint_apply(optics.exit_map, tuple(w))
    return tuple(optics.gain * c for c in v)


def compose_second_pass(theta_rad: float, beta_rad: float) -> tuple[K.PolVector, complex]:
    """Dark state and filtered bright amplitude per unit of recycled H amplitude.

    Built from the elements only: internal return trip followed by another
    forward pass. Compare with ``scheme2_dark(...) @ KET_H`` and ``scheme2_bright``.
    """
    el = elements(theta_rad, beta_rad)
    psi = returned_state(internal_return(theta_rad, beta_rad))
    out = K.joint_apply(forward_transfer(theta_rad, beta_rad), psi)
    dark = K.port_state(K.joint_apply(el.m_d, out), PORT_D)
    bright = K.joint_apply(K.joint_compose(el.m_h, el.m_c), out)[K.joint_index(PORT_C, K.H)]
    return dark, bright
