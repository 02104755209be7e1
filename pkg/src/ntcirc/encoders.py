"""Binary-fraction angle encoding and universal rotation circuits.

An m-bit encoding r1..rm selects the angle (0.r1..rm) * 2pi. A rotation
encoder acts on one data qubit and leaves the encoding register untouched;
for every basis encoding the induced operator is exactly the rotation at the
decoded angle, so the only approximation error is the encoding rounding,
bounded by pi * 2^-m in operator norm.

Block j of an encoder is [Rot(s*pi/2^j), CX(r_j), Rot(-s*pi/2^j), CX(r_j)],
i.e. a controlled rotation by s*2pi/2^j via the identity
Rot(2phi) = Rot(phi) X Rot(-phi) X. A + block and a - block driven by the
same register implement a rotation and its adjoint with one shared encoding,
which is what the controlled blocks below rely on.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, Gate, x
from .qmath import zyz_decompose

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class AngleEncoding:
    """Ordered encoding bits r1..rm, MSB first."""

    bits: str

    def __post_init__(self):
        if not self.bits or set(self.bits) - {"0", "1"}:
            raise ValueError(f"encoding must be a non-empty bit string, got {self.bits!r}")

    @property
    def m(self) -> int:
        return len(self.bits)

    def fraction(self) -> float:
        """The binary fraction 0.r1..rm."""
        return int(self.bits, 2) / (1 << self.m)

    def decode(self, scale: float = _TWO_PI) -> float:
        """Decoded angle, 0.r1..rm times the scale (2pi by default)."""
        return self.fraction() * scale


def encode_angle(theta: float, m: int) -> AngleEncoding:
    """Round theta (mod 2pi) to the nearest m-bit fraction of 2pi, half up.

    The wraparound case rounds to all zeros, so the error is circular:
    |theta - decoded| <= 2pi * 2^-(m+1).
    """
    if m < 1:
        raise ValueError(f"encoding width must be >= 1, got {m}")
    if not math.isfinite(theta):
        raise ValueError(f"angle must be finite, got {theta}")
    frac = (theta % _TWO_PI) / _TWO_PI
    k = math.floor(frac * (1 << m) + 0.5) % (1 << m)
    return AngleEncoding(format(k, f"0{m}b"))


def _sign_value(sign) -> int:
    if sign in (1, "+"):
        return 1
    if sign in (-1, "-"):
        return -1
    raise ValueError(f"sign must be one of +1, -1, '+', '-', got {sign!r}")


def _axis_kind(axis: str) -> str:
    if axis == "y":
        return "RY"
    if axis == "z":
        return "RZ"
    raise ValueError(f"axis must be 'y' or 'z', got {axis!r}")


def _encoder_gates(axis: str, sign, data: int, r_qubits) -> list[Gate]:
    """Gates acting as R_axis(sign * 0.r * 2pi) on `data` for basis r."""
    kind = _axis_kind(axis)
    s = _sign_value(sign)
    gates = []
    for j, rq in enumerate(r_qubits, start=1):
        gates.append(Gate(kind, data, dyadic=(s, j)))
        gates.append(x(data, [(rq, 1)]))
        gates.append(Gate(kind, data, dyadic=(-s, j)))
        gates.append(x(data, [(rq, 1)]))
    return gates


def build_rotation_encoder(axis: str, sign, m: int) -> Circuit:
    """Universal circuit for R_axis(+-theta): data on qubit 0, encoding on 1..m."""
    if m < 1:
        raise ValueError(f"encoding width must be >= 1, got {m}")
    return Circuit(1 + m, tuple(_encoder_gates(axis, sign, 0, range(1, m + 1))))


def build_controlled_block(kind: str, m: int) -> Circuit:
    """Universal circuit for an encoded controlled gate on (control, target).

    Qubit 0 is the control, qubit 1 the target, qubits 2..m+1 the encoding r.

    CR acts as the plane rotation R(0.r * 2pi) on the target when the control
    is |0>, exactly: a + and a - Ry encoder block around anti-controlled X.

    CP acts as controlled-P(0.r * 4pi), firing on control |1>, exact up to the
    global phase e^{-i * 0.r * pi}: Rz encoder blocks around controlled X
    produce diag(1, 1, e^{-i t/2}, e^{i t/2}); a third Rz block on the control
    qubit turns the leftover conditional phase into a truly global one, which
    keeps superposed control branches coherent.
    """
    if m < 1:
        raise ValueError(f"encoding width must be >= 1, got {m}")
    r_qubits = range(2, m + 2)
    if kind == "CR":
        gates = (
            _encoder_gates("y", +1, 1, r_qubits)
            + [x(1, [(0, 0)])]
            + _encoder_gates("y", -1, 1, r_qubits)
            + [x(1, [(0, 0)])]
        )
    elif kind == "CP":
        gates = (
            _encoder_gates("z", +1, 0, r_qubits)
            + _encoder_gates("z", +1, 1, r_qubits)
            + [x(1, [(0, 1)])]
            + _encoder_gates("z", -1, 1, r_qubits)
            + [x(1, [(0, 1)])]
        )
    else:
        raise ValueError(f"kind must be 'CR' or 'CP', got {kind!r}")
    return Circuit(2 + m, tuple(gates))


def build_single_qubit_universal(m: int) -> Circuit:
    """Universal single-qubit circuit: Rz, Ry, Rz encoder blocks in sequence.

    Data on qubit 0; encodings e1 (delta), e2 (gamma), e3 (beta) on the next
    three m-qubit registers. For basis encodings the induced operator is
    Rz(0.e3 * 2pi) Ry(0.e2 * 2pi) Rz(0.e1 * 2pi).
    """
    if m < 1:
        raise ValueError(f"encoding width must be >= 1, got {m}")
    gates = (
        _encoder_gates("z", +1, 0, range(1, m + 1))
        + _encoder_gates("y", +1, 0, range(m + 1, 2 * m + 1))
        + _encoder_gates("z", +1, 0, range(2 * m + 1, 3 * m + 1))
    )
    return Circuit(1 + 3 * m, tuple(gates))


def encode_single_qubit(u: np.ndarray, m: int) -> tuple[AngleEncoding, AngleEncoding, AngleEncoding]:
    """ZYZ-derived encodings (e1, e2, e3) for the universal single-qubit circuit.

    The circuit realizes u up to the dropped global phase e^{i*alpha}; beta and
    delta are reduced mod 2pi before encoding, the sign change this may cause
    being absorbed into that same discarded phase.
    """
    _, beta, gamma, delta = zyz_decompose(u)
    return encode_angle(delta, m), encode_angle(gamma, m), encode_angle(beta, m)
