"""Gate-level circuit IR with polarity-annotated multi-controls.

Gate kinds are X, RY, RZ (half-angle rotation convention) plus P, the phase
gate diag(1, e^{i*angle}). P appears only in exact reference circuits; it is
never dyadic and always fails the universal-set check.

Dyadic rotations store (sign, j) meaning angle = sign * pi / 2**j, so the
dyadic property is decided by representation, not by float comparison.
Circuits are immutable; every transform returns a new circuit.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

GATE_KINDS = ("X", "RY", "RZ", "P")


class Control(NamedTuple):
    qubit: int
    polarity: int  # 1 fires on |1>, 0 fires on |0>


@dataclass(frozen=True)
class Gate:
    kind: str
    target: int
    controls: tuple[Control, ...] = ()
    angle: float | None = None
    dyadic: tuple[int, int] | None = None  # (sign, j) -> sign * pi / 2**j

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if self.target < 0:
            raise ValueError(f"negative target {self.target}")
        ctrls = tuple(sorted(Control(int(q), int(p)) for q, p in self.controls))
        object.__setattr__(self, "controls", ctrls)
        seen = {self.target}
        for c in ctrls:
            if c.polarity not in (0, 1):
                raise ValueError(f"control polarity must be 0 or 1, got {c.polarity}")
            if c.qubit < 0:
                raise ValueError(f"negative control qubit {c.qubit}")
            if c.qubit in seen:
                raise ValueError(f"duplicate qubit {c.qubit} in gate")
            seen.add(c.qubit)
        if self.kind == "X":
            if self.angle is not None or self.dyadic is not None:
                raise ValueError("X gate carries no angle")
        elif self.kind == "P":
            if self.angle is None or self.dyadic is not None:
                raise ValueError("P gate requires a generic angle")
        else:  # RY / RZ
            if (self.angle is None) == (self.dyadic is None):
                raise ValueError(f"{self.kind} needs exactly one of angle or dyadic")
        if self.angle is not None and not math.isfinite(self.angle):
            raise ValueError(f"angle must be finite, got {self.angle}")
        if self.dyadic is not None:
            sign, j = self.dyadic
            if sign not in (1, -1) or not isinstance(j, int) or j < 0:
                raise ValueError(f"dyadic must be (+-1, j>=0), got {self.dyadic}")

    @property
    def rotation_angle(self) -> float:
        """Numeric angle of a rotation/phase gate (raises for X)."""
        if self.kind == "X":
            raise ValueError("X gate has no angle")
        if self.dyadic is not None:
            sign, j = self.dyadic
            return sign * math.pi / (1 << j)
        return self.angle

    @property
    def is_dyadic(self) -> bool:
        return self.dyadic is not None

    def max_qubit(self) -> int:
        return max([self.target] + [c.qubit for c in self.controls])


def x(target: int, controls: Iterable[tuple[int, int]] = ()) -> Gate:
    return Gate("X", target, tuple(controls))


def ry(target: int, angle: float, controls: Iterable[tuple[int, int]] = ()) -> Gate:
    return Gate("RY", target, tuple(controls), angle=angle)


def rz(target: int, angle: float, controls: Iterable[tuple[int, int]] = ()) -> Gate:
    return Gate("RZ", target, tuple(controls), angle=angle)


def p(target: int, angle: float, controls: Iterable[tuple[int, int]] = ()) -> Gate:
    return Gate("P", target, tuple(controls), angle=angle)


def ry_dyadic(target: int, sign: int, j: int, controls: Iterable[tuple[int, int]] = ()) -> Gate:
    return Gate("RY", target, tuple(controls), dyadic=(sign, j))


def rz_dyadic(target: int, sign: int, j: int, controls: Iterable[tuple[int, int]] = ()) -> Gate:
    return Gate("RZ", target, tuple(controls), dyadic=(sign, j))


@dataclass(frozen=True)
class Circuit:
    width: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        if self.width < 1:
            raise ValueError(f"width must be positive, got {self.width}")
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if g.max_qubit() >= self.width:
                raise ValueError(
                    f"gate on qubit {g.max_qubit()} exceeds width {self.width}"
                )

    def __len__(self) -> int:
        return len(self.gates)


def compose(a: Circuit, b: Circuit) -> Circuit:
    """Sequential composition: gates of a, then gates of b."""
    if a.width != b.width:
        raise ValueError(f"width mismatch: {a.width} vs {b.width}")
    return Circuit(a.width, a.gates + b.gates)


def inverse(c: Circuit) -> Circuit:
    """Mirror-image circuit: reversed order, rotation/phase angles negated."""
    inv = []
    for g in reversed(c.gates):
        if g.kind == "X":
            inv.append(g)
        elif g.dyadic is not None:
            sign, j = g.dyadic
            inv.append(Gate(g.kind, g.target, g.controls, dyadic=(-sign, j)))
        else:
            inv.append(Gate(g.kind, g.target, g.controls, angle=-g.angle))
    return Circuit(c.width, tuple(inv))


def shift(c: Circuit, offset: int, width: int) -> Circuit:
    """Embed a circuit at a qubit offset inside a wider circuit."""
    if offset < 0 or offset + c.width > width:
        raise ValueError(f"cannot place width-{c.width} circuit at {offset} in {width}")
    gates = []
    for g in c.gates:
        ctrls = tuple(Control(q + offset, pol) for q, pol in g.controls)
        gates.append(Gate(g.kind, g.target + offset, ctrls, g.angle, g.dyadic))
    return Circuit(width, tuple(gates))


def gate_set_report(c: Circuit) -> Counter:
    """Census of gate descriptors: ('X', n_controls) and (kind, dyadic|generic)."""
    census: Counter = Counter()
    for g in c.gates:
        if g.kind == "X":
            census[("X", len(g.controls))] += 1
        else:
            census[(g.kind, "dyadic" if g.is_dyadic else "generic")] += 1
    return census


def universal_set_ok(c: Circuit) -> bool:
    """True iff the circuit uses only (multi-)controlled X and dyadic rotations."""
    for key in gate_set_report(c):
        if key[0] == "X":
            continue
        if key[0] in ("RY", "RZ") and key[1] == "dyadic":
            continue
        return False
    return True


@dataclass(frozen=True)
class RegisterLayout:
    """Named contiguous qubit blocks, in qubit order."""

    blocks: tuple[tuple[str, int], ...]

    def __post_init__(self):
        names = [name for name, _ in self.blocks]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate block names in {names}")
        for name, w in self.blocks:
            if w < 1:
                raise ValueError(f"block {name!r} has non-positive width {w}")

    @classmethod
    def for_cu(cls, n: int, m: int | None = None) -> "RegisterLayout":
        """Layout w:n, x:n, y:n, b:2 and, for the universal circuit, r:m."""
        blocks = [("w", n), ("x", n), ("y", n), ("b", 2)]
        if m is not None:
            blocks.append(("r", m))
        return cls(tuple(blocks))

    @property
    def width(self) -> int:
        return sum(w for _, w in self.blocks)

    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.blocks)

    def block_width(self, name: str) -> int:
        for bname, w in self.blocks:
            if bname == name:
                return w
        raise KeyError(name)

    def qubits(self, name: str) -> range:
        off = 0
        for bname, w in self.blocks:
            if bname == name:
                return range(off, off + w)
            off += w
        raise KeyError(name)


def format_circuit(c: Circuit) -> str:
    """Circuit text format; bit-exact round trip through parse_circuit."""
    lines = [f"qubits {c.width}"]
    for g in c.gates:
        parts = [g.kind, f"t={g.target}"]
        if g.kind in ("RY", "RZ"):
            if g.dyadic is not None:
                sign, j = g.dyadic
                parts.append(f"sign={'+' if sign > 0 else '-'}")
                parts.append(f"j={j}")
            else:
                parts.append(f"angle={g.angle!r}")
        elif g.kind == "P":
            parts.append(f"angle={g.angle!r}")
        if g.controls:
            parts.append("c=" + ",".join(f"{q}:{pol}" for q, pol in g.controls))
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def parse_circuit(text: str) -> Circuit:
    """Parse the circuit text format."""
    lines = [line.split("#", 1)[0].strip() for line in text.splitlines()]
    lines = [line for line in lines if line]
    if not lines:
        raise ValueError("empty circuit file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "qubits":
        raise ValueError(f"bad header line {lines[0]!r}")
    try:
        width = int(head[1])
    except ValueError:
        raise ValueError(f"bad qubit count {head[1]!r}") from None
    gates = []
    for line in lines[1:]:
        gates.append(_parse_gate_line(line))
    return Circuit(width, tuple(gates))


def _parse_gate_line(line: str) -> Gate:
    parts = line.split()
    kind = parts[0]
    if kind not in GATE_KINDS:
        raise ValueError(f"unknown gate kind {kind!r} in line {line!r}")
    fields: dict[str, str] = {}
    for tok in parts[1:]:
        if "=" not in tok:
            raise ValueError(f"bad token {tok!r} in line {line!r}")
        key, val = tok.split("=", 1)
        if key in fields:
            raise ValueError(f"duplicate field {key!r} in line {line!r}")
        fields[key] = val
    try:
        target = int(fields.pop("t"))
    except KeyError:
        raise ValueError(f"missing target in line {line!r}") from None
    controls = ()
    if "c" in fields:
        controls = tuple(_parse_control(tok) for tok in fields.pop("c").split(","))
    angle = None
    dyadic = None
    if "sign" in fields or "j" in fields:
        if kind not in ("RY", "RZ"):
            raise ValueError(f"dyadic form not allowed for {kind} in line {line!r}")
        sign_s = fields.pop("sign", None)
        j_s = fields.pop("j", None)
        if sign_s not in ("+", "-") or j_s is None:
            raise ValueError(f"bad dyadic fields in line {line!r}")
        dyadic = (1 if sign_s == "+" else -1, int(j_s))
    elif "angle" in fields:
        angle = float(fields.pop("angle"))
    if fields:
        raise ValueError(f"unexpected fields {sorted(fields)} in line {line!r}")
    return Gate(kind, target, controls, angle=angle, dyadic=dyadic)


def _parse_control(tok: str) -> Control:
    try:
        q, pol = tok.split(":")
        return Control(int(q), int(pol))
    except ValueError:
        raise ValueError(f"bad control token {tok!r}") from None
