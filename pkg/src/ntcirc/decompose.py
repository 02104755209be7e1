"""Factorization of unitaries into near-trivial transformations and Gray-code
two-level circuit synthesis.

factor_unitary eliminates sub-diagonal entries column by column with plane
rotations, each preceded by a phase shift that aligns the pivot pair; the
inverted, reversed operation list is then a near-trivial product for the
input in application order: U = M(F_K) ... M(F_1). Dimension indices are
rendered as bit strings wide enough for the matrix, so power-of-two factor
sequences feed directly into the circuit pipeline.
"""
from __future__ import annotations

import math

import numpy as np

from .circuit import Circuit, inverse, p, ry, rz, x
from .encoders import encode_angle
from .neartrivial import EncodedProgram, NearTrivialSpec, encode_spec
from .qmath import is_unitary, phase_embed, rotation_embed, zyz_decompose

_TWO_PI = 2.0 * math.pi

# Angles closer than this to 0 (mod 2pi) are identities and are pruned.
_ANGLE_PRUNE = 1e-12

X_MATRIX = np.array([[0, 1], [1, 0]], dtype=complex)


def gray_code(x: str, y: str) -> list[str]:
    """Bit strings from x to y flipping one differing bit at a time,
    least-significant first; has Ham(x, y) + 1 elements."""
    if len(x) != len(y):
        raise ValueError(f"bit strings must have equal length: {x!r}, {y!r}")
    if set(x + y) - {"0", "1"}:
        raise ValueError(f"inputs must be bit strings: {x!r}, {y!r}")
    seq = [x]
    cur = list(x)
    for pos in range(len(x) - 1, -1, -1):
        if cur[pos] != y[pos]:
            cur[pos] = y[pos]
            seq.append("".join(cur))
    return seq


def build_two_level_circuit(x_bits: str, y_bits: str, u: np.ndarray) -> Circuit:
    """Circuit equal to embed_two_level(u, x, y, n): a multi-controlled X
    ladder along the Gray code, the controlled u at the last differing bit,
    and the mirrored ladder back."""
    if x_bits == y_bits:
        raise ValueError("two-level circuit requires x != y")
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2) or not is_unitary(u):
        raise ValueError("u must be a 2x2 unitary")
    n = len(x_bits)
    code = gray_code(x_bits, y_bits)
    ladder = []
    for prev, cur in zip(code[:-2], code[1:-1]):
        pos = _diff_position(prev, cur)
        ladder.append(x(pos, [(q, int(cur[q])) for q in range(n) if q != pos]))
    last = code[-2]
    pos = _diff_position(last, y_bits)
    controls = [(q, int(y_bits[q])) for q in range(n) if q != pos]
    # The target wire's |0>/|1> map onto the |last>/|y> pair; conjugate by X
    # when |last> carries a 1 there so u[0][0] stays attached to dimension x.
    u_eff = u if last[pos] == "0" else X_MATRIX @ u @ X_MATRIX
    middle = _controlled_unitary_gates(u_eff, pos, controls)
    up = Circuit(n, tuple(ladder))
    return Circuit(n, up.gates + tuple(middle) + inverse(up).gates)


def _controlled_unitary_gates(u: np.ndarray, target: int, controls) -> list:
    if np.allclose(u, X_MATRIX, atol=1e-12):
        return [x(target, controls)]
    alpha, beta, gamma, delta = zyz_decompose(u)
    gates = []
    if delta != 0.0:
        gates.append(rz(target, delta, controls))
    if gamma != 0.0:
        gates.append(ry(target, gamma, controls))
    if beta != 0.0:
        gates.append(rz(target, beta, controls))
    if alpha != 0.0:
        # controlled global phase: P(2a) Rz(-2a) = e^{ia} I on the target wire
        gates.append(rz(target, -2.0 * alpha, controls))
        gates.append(p(target, 2.0 * alpha, controls))
    return gates


def _diff_position(a: str, b: str) -> int:
    diffs = [i for i in range(len(a)) if a[i] != b[i]]
    if len(diffs) != 1:
        raise ValueError(f"{a!r} and {b!r} differ in {len(diffs)} positions")
    return diffs[0]


class NearTrivialSequence:
    """Ordered near-trivial factors of a d-dimensional unitary.

    Application order: U = M(F_K) ... M(F_1), so applying the factors
    left-to-right to a state (or to the identity) reconstructs U.
    """

    def __init__(self, dim: int, factors):
        self.dim = int(dim)
        self.factors = tuple(factors)

    def __len__(self) -> int:
        return len(self.factors)

    def __iter__(self):
        return iter(self.factors)

    def reconstruct(self) -> np.ndarray:
        """Left-fold the factor matrices over the identity."""
        m = np.eye(self.dim, dtype=complex)
        for f in self.factors:
            i, j = int(f.x, 2), int(f.y, 2)
            if i == j:
                m = phase_embed(self.dim, i, f.theta_prime) @ m
            else:
                m = rotation_embed(self.dim, i, j, f.theta) @ m
        return m


def index_bits(i: int, dim: int) -> str:
    """Dimension index rendered as a bit string wide enough for dim."""
    width = max(1, (dim - 1).bit_length())
    return format(i, f"0{width}b")


def factor_unitary(u: np.ndarray, tol: float = 1e-10) -> NearTrivialSequence:
    """Decompose a d x d unitary into near-trivial factors.

    Column-major Givens elimination: for each sub-diagonal entry above tol,
    a phase factor on the row being zeroed aligns it with the pivot, then a
    plane rotation by atan2(|U_kj|, |U_jj|) removes it (a pure pi/2 swap when
    the pivot is negligible); the leftover diagonal becomes phase factors.
    Factor count is at most d^2 <= 2d^2 - d.
    """
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError("matrix must be square")
    if not is_unitary(u, max(tol, 1e-12)):
        raise ValueError(f"matrix is not unitary within {tol:.0e}")
    d = u.shape[0]
    a = u.copy()
    ops: list[tuple] = []  # operations applied on the left, in order
    for j in range(d - 1):
        for k in range(j + 1, d):
            if abs(a[k, j]) <= tol:
                continue
            pivot = a[j, j]
            if abs(pivot) > tol:
                phi = math.atan2(pivot.imag, pivot.real) - math.atan2(
                    a[k, j].imag, a[k, j].real
                )
                if not _prunable(phi):
                    a[k, :] *= np.exp(1j * phi)
                    ops.append(("p", k, k, phi))
                theta = -math.atan2(abs(a[k, j]), abs(pivot))
            else:
                theta = -0.5 * math.pi
            row_j = math.cos(theta) * a[j, :] - math.sin(theta) * a[k, :]
            row_k = math.sin(theta) * a[j, :] + math.cos(theta) * a[k, :]
            a[j, :], a[k, :] = row_j, row_k
            ops.append(("r", j, k, theta))
    for j in range(d):
        psi = math.atan2(a[j, j].imag, a[j, j].real)
        if not _prunable(psi):
            ops.append(("p", j, j, -psi))
    factors = []
    for kind, i, j, angle in reversed(ops):  # adjoints, reversed
        ang = (-angle) % _TWO_PI
        if _prunable(ang):
            continue
        xb, yb = index_bits(i, d), index_bits(j, d)
        if kind == "p":
            factors.append(NearTrivialSpec(xb, yb, theta_prime=ang))
        else:
            factors.append(NearTrivialSpec(xb, yb, theta=ang))
    return NearTrivialSequence(d, factors)


def _prunable(angle: float) -> bool:
    a = angle % _TWO_PI
    return min(a, _TWO_PI - a) < _ANGLE_PRUNE


def compile_unitary(u: np.ndarray, n: int, m: int) -> list[EncodedProgram]:
    """Factor a 2^n-dimensional unitary and encode every factor for C_U'(n, m).

    Executing the programs in order approximates u within K * 2pi * 2^-m in
    operator norm (K = program count), up to one global phase.
    """
    u = np.asarray(u, dtype=complex)
    if n < 1 or u.shape != (1 << n, 1 << n):
        raise ValueError(f"matrix dimension {u.shape} is not 2^{n}")
    if m < 1:
        raise ValueError(f"encoding width must be >= 1, got {m}")
    return [encode_spec(f, m) for f in factor_unitary(u)]
