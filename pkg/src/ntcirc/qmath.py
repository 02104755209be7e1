"""Exact operator oracles: elementary gate matrices, near-trivial and
two-level embeddings, ZYZ decomposition, and operator distances.

Everything here is a closed-form dense construction used as ground truth when
verifying circuits. Matrices are complex128, indexed row-major (M[j, k] = row
j, column k); basis indices read register bit strings big-endian, so the
leftmost bit of a ket label is the most significant bit of the index.

Rotation convention (half-angle): Ry(a) = exp(-i*a*Y/2), Rz(a) = exp(-i*a*Z/2).
The plane rotation R(t) = [[cos t, -sin t], [sin t, cos t]] then satisfies
R(t) = Ry(2t) = Ry(t) X Ry(-t) X, and the phase gate P(t) = diag(1, e^{it})
satisfies P(t) = e^{it/2} Rz(t/2) X Rz(-t/2) X.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

UNITARY_TOL = 1e-10

# Below this magnitude a matrix entry is treated as exactly zero when picking
# the degenerate branch of the ZYZ decomposition.
_DEGENERATE_EPS = 1e-12

_TWO_PI = 2.0 * math.pi


class ZYZAngles(NamedTuple):
    """Angles with U = e^{i*alpha} Rz(beta) Ry(gamma) Rz(delta).

    Canonical ranges: gamma in [0, pi], beta and delta in [0, 4pi),
    alpha in [0, 2pi). When gamma is 0 or pi, delta is fixed to 0.
    """

    alpha: float
    beta: float
    gamma: float
    delta: float


def elementary_matrix(kind: str, angle: float = 0.0) -> np.ndarray:
    """Return the exact 2x2 matrix for one of R, P, Ry, Rz, X."""
    if not math.isfinite(angle):
        raise ValueError(f"angle must be finite, got {angle}")
    if kind == "X":
        return np.array([[0, 1], [1, 0]], dtype=complex)
    if kind == "R":
        c, s = math.cos(angle), math.sin(angle)
        return np.array([[c, -s], [s, c]], dtype=complex)
    if kind == "P":
        return np.array([[1, 0], [0, np.exp(1j * angle)]], dtype=complex)
    if kind == "Ry":
        c, s = math.cos(angle / 2), math.sin(angle / 2)
        return np.array([[c, -s], [s, c]], dtype=complex)
    if kind == "Rz":
        return np.array(
            [[np.exp(-0.5j * angle), 0], [0, np.exp(0.5j * angle)]], dtype=complex
        )
    raise ValueError(f"unknown elementary matrix kind {kind!r}")


def is_unitary(m: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    """Check ||M^dag M - I||_max <= tol."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    if not np.all(np.isfinite(m.view(float))):
        return False
    d = m.shape[0]
    return float(np.max(np.abs(m.conj().T @ m - np.eye(d)))) <= tol


def rotation_embed(dim: int, i: int, j: int, theta: float) -> np.ndarray:
    """Identity on `dim` dimensions except a plane rotation R(theta) on (i, j).

    Column i maps to cos(theta) e_i + sin(theta) e_j and column j to
    -sin(theta) e_i + cos(theta) e_j.
    """
    if not (0 <= i < dim and 0 <= j < dim):
        raise ValueError(f"dimensions ({i}, {j}) out of range for dim {dim}")
    if i == j:
        raise ValueError("rotation requires two distinct dimensions")
    m = np.eye(dim, dtype=complex)
    c, s = math.cos(theta), math.sin(theta)
    m[i, i] = c
    m[j, i] = s
    m[i, j] = -s
    m[j, j] = c
    return m


def phase_embed(dim: int, i: int, phi: float) -> np.ndarray:
    """Identity on `dim` dimensions except entry (i, i) = e^{i*phi}."""
    if not 0 <= i < dim:
        raise ValueError(f"dimension {i} out of range for dim {dim}")
    m = np.eye(dim, dtype=complex)
    m[i, i] = np.exp(1j * phi)
    return m


def near_trivial_matrix(spec, n: int) -> np.ndarray:
    """Exact 2^n x 2^n matrix of a near-trivial transformation.

    `spec` carries n-bit strings x, y plus angles theta / theta_prime; a
    rotation by theta between dimensions x != y, or the phase e^{i*theta'}
    on dimension x when x == y.
    """
    if len(spec.x) != n or len(spec.y) != n:
        raise ValueError(f"spec bit strings must have length {n}")
    dim = 1 << n
    ix, iy = int(spec.x, 2), int(spec.y, 2)
    if ix == iy:
        return phase_embed(dim, ix, spec.theta_prime)
    return rotation_embed(dim, ix, iy, spec.theta)


def embed_two_level(u: np.ndarray, x: str, y: str, n: int) -> np.ndarray:
    """Embed a 2x2 unitary on basis dimensions x and y of an n-qubit space.

    u[0][0] lands at (x, x); everything outside the (x, y) block is identity.
    """
    if x == y:
        raise ValueError("two-level embedding requires x != y")
    if len(x) != n or len(y) != n:
        raise ValueError(f"bit strings must have length {n}")
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise ValueError("u must be 2x2")
    if not is_unitary(u):
        raise ValueError("u is not unitary within 1e-10")
    ix, iy = int(x, 2), int(y, 2)
    m = np.eye(1 << n, dtype=complex)
    m[ix, ix] = u[0, 0]
    m[ix, iy] = u[0, 1]
    m[iy, ix] = u[1, 0]
    m[iy, iy] = u[1, 1]
    return m


def zyz_decompose(u: np.ndarray) -> ZYZAngles:
    """Decompose a 2x2 unitary as e^{i*alpha} Rz(beta) Ry(gamma) Rz(delta)."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise ValueError("u must be 2x2")
    if not is_unitary(u):
        raise ValueError("u is not unitary within 1e-10")
    det = u[0, 0] * u[1, 1] - u[0, 1] * u[1, 0]
    alpha = 0.5 * math.atan2(det.imag, det.real)
    v = u * np.exp(-1j * alpha)  # special unitary up to rounding
    if abs(v[1, 0]) <= _DEGENERATE_EPS:  # diagonal: gamma = 0, fold into beta
        gamma, beta, delta = 0.0, 2.0 * _arg(v[1, 1]), 0.0
    elif abs(v[0, 0]) <= _DEGENERATE_EPS:  # anti-diagonal: gamma = pi
        gamma, beta, delta = math.pi, 2.0 * _arg(v[1, 0]), 0.0
    else:
        gamma = 2.0 * math.atan2(abs(v[1, 0]), abs(v[0, 0]))
        beta = _arg(v[1, 1]) + _arg(v[1, 0])
        delta = _arg(v[1, 1]) - _arg(v[1, 0])
    return ZYZAngles(alpha % _TWO_PI, beta % (2 * _TWO_PI), gamma, delta % (2 * _TWO_PI))


def zyz_matrix(angles: ZYZAngles) -> np.ndarray:
    """Rebuild the 2x2 unitary e^{i*alpha} Rz(beta) Ry(gamma) Rz(delta)."""
    alpha, beta, gamma, delta = angles
    m = (
        elementary_matrix("Rz", beta)
        @ elementary_matrix("Ry", gamma)
        @ elementary_matrix("Rz", delta)
    )
    return np.exp(1j * alpha) * m


def operator_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Spectral norm ||A - B|| (largest singular value of the difference)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b, ord=2))


def distance_up_to_global_phase(a: np.ndarray, b: np.ndarray) -> tuple[float, float]:
    """Minimal ||A - e^{i*phi} B|| over a global phase, plus the phase.

    The reported phase is arg(trace(A^dag B)) in [0, 2pi), i.e. the factor by
    which B leads A (B ~ e^{i*phase} A when the distance is small). When the
    trace vanishes exactly, 4096 uniformly spaced phases are scanned instead.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    tr = complex(np.trace(a.conj().T @ b))
    if tr != 0:
        phase = _arg(tr)
        dist = operator_distance(a, np.exp(-1j * phase) * b)
        return dist, phase % _TWO_PI
    phis = _TWO_PI * np.arange(4096) / 4096.0
    dists = [operator_distance(a, np.exp(1j * p) * b) for p in phis]
    k = int(np.argmin(dists))
    return dists[k], (-phis[k]) % _TWO_PI


def format_matrix(m: np.ndarray) -> str:
    """Matrix text format: dimension line, then rows of 're im' pairs."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    lines = [str(m.shape[0])]
    for row in m:
        lines.append(" ".join(f"{z.real:.17e} {z.imag:.17e}" for z in row))
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> np.ndarray:
    """Parse the matrix text format produced by format_matrix."""
    rows = [line.split("#", 1)[0].strip() for line in text.splitlines()]
    rows = [r for r in rows if r]
    if not rows:
        raise ValueError("empty matrix file")
    try:
        d = int(rows[0])
    except ValueError:
        raise ValueError(f"bad dimension line {rows[0]!r}") from None
    if d < 1:
        raise ValueError(f"dimension must be positive, got {d}")
    if len(rows) != d + 1:
        raise ValueError(f"expected {d} matrix rows, found {len(rows) - 1}")
    m = np.empty((d, d), dtype=complex)
    for j, line in enumerate(rows[1:]):
        parts = line.split()
        if len(parts) != 2 * d:
            raise ValueError(f"row {j} has {len(parts)} values, expected {2 * d}")
        try:
            vals = [float(p) for p in parts]
        except ValueError:
            raise ValueError(f"row {j} contains a non-numeric value") from None
        m[j] = [complex(vals[2 * k], vals[2 * k + 1]) for k in range(d)]
    if not np.all(np.isfinite(m.view(float))):
        raise ValueError("matrix contains non-finite entries")
    return m


def _arg(z: complex) -> float:
    return math.atan2(z.imag, z.real)
