"""Fixed-size complex linear algebra for polarization and path-polarization space.

Polarization vectors and operators are 2-dimensional over the basis (H, V).
Joint vectors live in path (x) polarization with index ``2 * port + pol``,
where ``port`` is 0 or 1 (a/b at the input, 1/2 inside the interferometer,
c/d at the output) and ``pol`` is 0 for H, 1 for V.

Amplitudes are plain Python ``complex`` values; everything here is immutable.
"""

from __future__ import annotations

import math
from typing import NamedTuple, Sequence

H = 0
V = 1


class PolVector(NamedTuple):
    h: complex
    v: complex

    def scaled(self, c: complex) -> "PolVector":
        return PolVector(c * self.h, c * self.v)


class PolOperator(NamedTuple):
    """2x2 operator, rows/columns ordered (H, V)."""

    hh: complex
    hv: complex
    vh: complex
    vv: complex

    def __matmul__(self, other):
        if isinstance(other, PolOperator):
            return compose(self, other)
        if isinstance(other, PolVector):
            return apply(self, other)
        return NotImplemented


KET_H = PolVector(1 + 0j, 0j)
KET_V = PolVector(0j, 1 + 0j)
IDENTITY = PolOperator(1 + 0j, 0j, 0j, 1 + 0j)
SIGMA_X = PolOperator(0j, 1 + 0j, 1 + 0j, 0j)
PROJ_H = PolOperator(1 + 0j, 0j, 0j, 0j)
PROJ_V = PolOperator(0j, 0j, 0j, 1 + 0j)


def apply(op: PolOperator, vec: PolVector) -> PolVector:
    return PolVector(op.hh * vec.h + op.hv * vec.v, op.vh * vec.h + op.vv * vec.v)


def compose(a: PolOperator, b: PolOperator) -> PolOperator:
    """Return ``a @ b``; ``b`` acts first."""
    return PolOperator(
        a.hh * b.hh + a.hv * b.vh,
        a.hh * b.hv + a.hv * b.vv,
        a.vh * b.hh + a.vv * b.vh,
        a.vh * b.hv + a.vv * b.vv,
    )


def norm_sq(vec: PolVector) -> float:
    return abs(vec.h) ** 2 + abs(vec.v) ** 2


def scalar(c: complex) -> PolOperator:
    return PolOperator(complex(c), 0j, 0j, complex(c))


def scale(op: PolOperator, c: complex) -> PolOperator:
    return PolOperator(c * op.hh, c * op.hv, c * op.vh, c * op.vv)


def add(a: PolOperator, b: PolOperator) -> PolOperator:
    return PolOperator(a.hh + b.hh, a.hv + b.hv, a.vh + b.vh, a.vv + b.vv)


def adjoint(op: PolOperator) -> PolOperator:
    return PolOperator(
        op.hh.conjugate(), op.vh.conjugate(), op.hv.conjugate(), op.vv.conjugate()
    )


def max_abs_diff(a: Sequence[complex], b: Sequence[complex]) -> float:
    return max(abs(x - y) for x, y in zip(a, b))


def is_unitary(op: PolOperator, tol: float = 1e-12) -> bool:
    return max_abs_diff(compose(adjoint(op), op), IDENTITY) <= tol


# --- joint path (x) polarization space ---------------------------------------

JointVector = tuple  # 4 complex amplitudes
JointOperator = tuple  # 4 rows of 4 complex amplitudes


def joint_index(port: int, pol: int) -> int:
    return 2 * port + pol


def joint_basis(port: int, pol: int) -> JointVector:
    out = [0j] * 4
    out[joint_index(port, pol)] = 1 + 0j
    return tuple(out)


def joint_apply(op: JointOperator, vec: JointVector) -> JointVector:
    return tuple(sum(row[k] * vec[k] for k in range(4)) for row in op)


def joint_compose(*ops: JointOperator) -> JointOperator:
    """Product ``ops[0] @ ops[1] @ ...``; the last operator acts first."""
    result = ops[-1]
    for op in reversed(ops[:-1]):
        result = tuple(
            tuple(sum(op[i][k] * result[k][j] for k in range(4)) for j in range(4))
            for i in range(4)
        )
    return result


def joint_adjoint(op: JointOperator) -> JointOperator:
    return tuple(tuple(op[j][i].conjugate() for j in range(4)) for i in range(4))


def joint_norm_sq(vec: JointVector) -> float:
    return sum(abs(c) ** 2 for c in vec)


def joint_identity() -> JointOperator:
    return tuple(tuple(1 + 0j if i == j else 0j for j in range(4)) for i in range(4))


def path_operator(p00: complex, p01: complex, p10: complex, p11: complex) -> JointOperator:
    """Lift a 2x2 path operator to the joint space (identity on polarization)."""
    path = ((p00, p01), (p10, p11))
    return tuple(
        tuple(
            complex(path[i // 2][j // 2]) if i % 2 == j % 2 else 0j for j in range(4)
        )
        for i in range(4)
    )


def on_port(port: int, op: PolOperator) -> JointOperator:
    """Act with ``op`` on polarization when the photon is in ``port``; identity elsewhere."""
    rows = [[0j] * 4 for _ in range(4)]
    for p in (0, 1):
        block = op if p == port else IDENTITY
        base = 2 * p
        rows[base][base], rows[base][base + 1] = block.hh, block.hv
        rows[base + 1][base], rows[base + 1][base + 1] = block.vh, block.vv
    return tuple(tuple(r) for r in rows)


def on_polarization(op: PolOperator) -> JointOperator:
    """Act with ``op`` on polarization regardless of path."""
    return joint_compose(on_port(0, op), on_port(1, op))


def block(op: JointOperator, out_port: int, in_port: int) -> PolOperator:
    """Polarization operator from ``in_port`` to ``out_port``."""
    i, j = 2 * out_port, 2 * in_port
    return PolOperator(op[i][j], op[i][j + 1], op[i + 1][j], op[i + 1][j + 1])


def port_state(vec: JointVector, port: int) -> PolVector:
    return PolVector(vec[2 * port], vec[2 * port + 1])


def joint_is_unitary(op: JointOperator, tol: float = 1e-12) -> bool:
    prod = joint_compose(joint_adjoint(op), op)
    ident = joint_identity()
    return max(abs(prod[i][j] - ident[i][j]) for i in range(4) for j in range(4)) <= tol


def is_finite(vec: Sequence[complex]) -> bool:
    return all(math.isfinite(c.real) and math.isfinite(c.imag) for c in vec)
