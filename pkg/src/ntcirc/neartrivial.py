"""Near-trivial transformation circuits: the register tagger C_a, the
conditional rotation/phase stage C_b (exact and universal), and their
composition C_U / C_U' with the spec-to-ancilla encoding.

Registers for width n: w (data) on qubits 0..n-1, x on n..2n-1, y on 2n..3n-1,
b on 3n..3n+1 (initialized |10>), and for the universal circuit r (m encoding
qubits) after b.

C_a tags the data register against x and y: it computes b' = 00/01/10/11 for
w=x, w=y, w fresh, w=x=y respectively, clearing w to 0 in the first two cases.
C_b then rotates or phases the second b qubit depending on the first, and the
mirror image of C_a restores everything. The net effect on the data register
is the near-trivial transformation selected by the ancillas.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .circuit import Circuit, compose, inverse, p, ry, shift, x
from .encoders import AngleEncoding, build_controlled_block, encode_angle
from .simulator import run

LEAKAGE_TOL = 1e-10


@dataclass(frozen=True)
class NearTrivialSpec:
    """Unified notation [x, y, theta, theta']: a rotation by theta between
    dimensions x != y, or the phase e^{i*theta'} on dimension x when x == y."""

    x: str
    y: str
    theta: float = 0.0
    theta_prime: float = 0.0

    def __post_init__(self):
        if not self.x or len(self.x) != len(self.y):
            raise ValueError(f"x and y must be equal-length bit strings: {self.x!r}, {self.y!r}")
        if set(self.x + self.y) - {"0", "1"}:
            raise ValueError(f"x and y must be bit strings: {self.x!r}, {self.y!r}")
        for a in (self.theta, self.theta_prime):
            if not math.isfinite(a):
                raise ValueError(f"angles must be finite, got {a}")

    @property
    def n(self) -> int:
        return len(self.x)

    @property
    def is_phase(self) -> bool:
        return self.x == self.y


@dataclass(frozen=True)
class EncodedProgram:
    """Ancilla basis values driving one C_U' application."""

    x_bits: str
    y_bits: str
    r: AngleEncoding
    b_init: str = "10"

    def __post_init__(self):
        if self.b_init != "10":
            raise ValueError(f"b register must start as '10', got {self.b_init!r}")
        if len(self.x_bits) != len(self.y_bits):
            raise ValueError("x and y widths differ")

    @property
    def n(self) -> int:
        return len(self.x_bits)

    @property
    def m(self) -> int:
        return self.r.m


def build_ca(n: int) -> Circuit:
    """Tagging circuit C_a on 3n+2 qubits.

    CNOT fans fold w into the x and y blocks, three multi-controlled X gates
    derive b' (b2 flips when y^w is all zero; b1 flips once for x^w all zero
    and once for y^w all zero, starting from b=10), the fans restore x and y,
    and w is cleared under b'=00 (copy of x) or b'=01 (copy of y).
    """
    if n < 1:
        raise ValueError(f"register width must be >= 1, got {n}")
    b1, b2 = 3 * n, 3 * n + 1
    fan = [x(n + i, [(i, 1)]) for i in range(n)]
    fan += [x(2 * n + i, [(i, 1)]) for i in range(n)]
    x_zero = [(n + i, 0) for i in range(n)]
    y_zero = [(2 * n + i, 0) for i in range(n)]
    tag = [x(b2, y_zero), x(b1, x_zero), x(b1, y_zero)]
    clear = []
    for i in range(n):
        clear.append(x(i, [(b1, 0), (b2, 0), (n + i, 1)]))
        clear.append(x(i, [(b1, 0), (b2, 1), (2 * n + i, 1)]))
    return Circuit(3 * n + 2, tuple(fan + tag + fan + clear))


def build_cb_exact(theta: float, theta_prime: float) -> Circuit:
    """Exact C_b on the 2-qubit b register: C^1_0(R(theta)) then C(P(theta'))."""
    return Circuit(2, (ry(1, 2.0 * theta, [(0, 0)]), p(1, theta_prime, [(0, 1)])))


def build_cb_universal(m: int) -> Circuit:
    """Universal C_b' on 2+m qubits: CR and CP sharing one encoding register.

    For basis r it acts as C^1_0(R(0.r*2pi)) on the b1=0 branch and as
    C(P(0.r*4pi)) on the b1=1 branch, exactly, up to the single global phase
    e^{-i*0.r*pi}.
    """
    return compose(build_controlled_block("CR", m), build_controlled_block("CP", m))


def build_cu_exact(n: int, theta: float, theta_prime: float) -> Circuit:
    """Fixed-angle near-trivial circuit C_U = C_a ; C_b ; C_a^-1 (width 3n+2)."""
    ca = build_ca(n)
    mid = shift(build_cb_exact(theta, theta_prime), 3 * n, 3 * n + 2)
    return compose(compose(ca, mid), inverse(ca))


@lru_cache(maxsize=32)
def build_cu_universal(n: int, m: int) -> Circuit:
    """Universal near-trivial circuit C_U' (width 3n+2+m).

    With ancillas |x>|y>|10>|r> it applies [x, y, 0.r*2pi] to the data register
    when x != y and [x, x, 0.r*4pi] when x == y, up to one global phase, and
    returns every ancilla unchanged.
    """
    width = 3 * n + 2 + m
    ca = shift(build_ca(n), 0, width)
    mid = shift(build_cb_universal(m), 3 * n, width)
    return compose(compose(ca, mid), inverse(ca))


def encode_spec(spec: NearTrivialSpec, m: int) -> EncodedProgram:
    """Ancilla encoding of a near-trivial spec: r holds theta/2pi for a
    rotation, or (theta'/2)/2pi for a phase shift (the CP block doubles it)."""
    angle = spec.theta_prime / 2.0 if spec.is_phase else spec.theta
    return EncodedProgram(spec.x, spec.y, encode_angle(angle, m))


def assemble_input(program: EncodedProgram, data_state: np.ndarray) -> np.ndarray:
    """Full C_U' input |data>|x>|y>|10>|r> for a data-register state."""
    n, m = program.n, program.m
    width = 3 * n + 2 + m
    if len(data_state) != (1 << n):
        raise ValueError(f"data state must have 2^{n} amplitudes")
    full = np.zeros(1 << width, dtype=complex)
    full[_data_indices(program)] = data_state
    return full


def apply_near_trivial(spec: NearTrivialSpec, state: np.ndarray, m: int) -> np.ndarray:
    """Run C_U'(n, m) on |state>|x>|y>|10>|r> and return the data register.

    Verifies that the ancillas come back to their input basis values (leakage
    above 1e-10 raises, signalling a broken construction) and normalizes the
    global phase so the largest-magnitude amplitude is real positive.
    """
    n = spec.n
    if len(state) != (1 << n):
        raise ValueError(f"state width does not match spec width {n}")
    program = encode_spec(spec, m)
    out = run(build_cu_universal(n, m), assemble_input(program, state))
    result = out[_data_indices(program)]
    resid = float(np.vdot(out, out).real - np.vdot(result, result).real)
    leakage = math.sqrt(max(resid, 0.0))
    if leakage > LEAKAGE_TOL:
        raise RuntimeError(f"ancilla leakage {leakage:.3e} exceeds {LEAKAGE_TOL:.0e}")
    k = int(np.argmax(np.abs(result)))
    mag = abs(result[k])
    if mag > 0:
        result = result * (mag / result[k])
    return result


def _data_indices(program: EncodedProgram) -> np.ndarray:
    n, m = program.n, program.m
    anc = (
        (int(program.x_bits, 2) << (n + 2 + m))
        | (int(program.y_bits, 2) << (2 + m))
        | (int(program.b_init, 2) << m)
        | int(program.r.bits, 2)
    )
    stride = 1 << (2 * n + 2 + m)
    return anc + stride * np.arange(1 << n, dtype=np.int64)


def format_programs(programs) -> str:
    """Program text format, one 'n= m= x= y= b= r=' line per program."""
    lines = []
    for prog in programs:
        lines.append(
            f"n={prog.n} m={prog.m} x={prog.x_bits} y={prog.y_bits} "
            f"b={prog.b_init} r={prog.r.bits}"
        )
    return "\n".join(lines) + ("\n" if lines else "")


def parse_programs(text: str) -> list[EncodedProgram]:
    """Parse the program text format (comment lines start with '#')."""
    programs = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = {}
        for tok in line.split():
            if "=" not in tok:
                raise ValueError(f"bad token {tok!r} in program line {raw!r}")
            key, val = tok.split("=", 1)
            fields[key] = val
        try:
            n, m = int(fields.pop("n")), int(fields.pop("m"))
            xb, yb = fields.pop("x"), fields.pop("y")
            b, r = fields.pop("b"), fields.pop("r")
        except KeyError as exc:
            raise ValueError(f"missing field {exc} in program line {raw!r}") from None
        if fields:
            raise ValueError(f"unexpected fields {sorted(fields)} in {raw!r}")
        if len(xb) != n or len(yb) != n or len(r) != m:
            raise ValueError(f"field widths disagree with n/m in {raw!r}")
        programs.append(EncodedProgram(xb, yb, AngleEncoding(r), b))
    return programs
