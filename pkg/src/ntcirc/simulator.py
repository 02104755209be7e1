"""Dense statevector execution and the effective-data-operator extractor.

States are complex128 arrays of length 2^n indexed big-endian: qubit 0 is the
most significant index bit, matching register-concatenated ket labels.
apply_gate partitions the amplitudes into independent pairs, so execution is
deterministic and norm-preserving gate by gate.
"""
from __future__ import annotations

import functools
import math

import numpy as np

from . import _kernels
from .circuit import Circuit, Gate, RegisterLayout
from .qmath import elementary_matrix

STATE_WIDTH_MAX = 26
UNITARY_WIDTH_MAX = 12

_EMIT_EPS = 1e-14


class CapacityError(ValueError):
    """Raised when a dense operation exceeds its width guard."""


def basis_state(n: int, index: int = 0) -> np.ndarray:
    """Computational basis state |index> on n qubits."""
    if n < 1:
        raise ValueError(f"qubit count must be positive, got {n}")
    if not 0 <= index < (1 << n):
        raise ValueError(f"basis index {index} out of range for {n} qubits")
    psi = np.zeros(1 << n, dtype=complex)
    psi[index] = 1.0
    return psi


def state_width(state: np.ndarray) -> int:
    """Qubit count of a state vector (validates the length is a power of 2)."""
    size = len(state)
    n = size.bit_length() - 1
    if size < 2 or (1 << n) != size:
        raise ValueError(f"state length {size} is not a power of two >= 2")
    return n


def apply_gate(state: np.ndarray, gate: Gate) -> np.ndarray:
    """Apply one gate, returning a new state vector."""
    n = state_width(state)
    if gate.max_qubit() >= n:
        raise ValueError(f"gate on qubit {gate.max_qubit()} exceeds {n} qubits")
    psi = np.array(state, dtype=complex)
    _dispatch(psi, _lower_gate(gate, n))
    return psi


def run(circuit: Circuit, state: np.ndarray) -> np.ndarray:
    """Run a circuit on a state vector, returning the final state."""
    if circuit.width > STATE_WIDTH_MAX:
        raise CapacityError(
            f"statevector width {circuit.width} exceeds {STATE_WIDTH_MAX}"
        )
    n = state_width(state)
    if circuit.width != n:
        raise ValueError(f"circuit width {circuit.width} != state width {n}")
    psi = np.array(state, dtype=complex)
    for low in _lower_circuit(circuit, n):
        _dispatch(psi, low)
    return psi


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Full unitary of a circuit (dense feasibility guard at width 12)."""
    w = circuit.width
    if w > UNITARY_WIDTH_MAX:
        raise CapacityError(f"circuit_unitary width {w} exceeds {UNITARY_WIDTH_MAX}")
    dim = 1 << w
    # Flattened identity: index = row * dim + col, so the row bits of qubit q
    # sit at position 2w-1-q and every column evolves in one kernel pass.
    mat = np.eye(dim, dtype=complex).reshape(-1)
    for low in _lower_circuit(circuit, 2 * w):
        _dispatch(mat, low)
    return mat.reshape(dim, dim)


def effective_data_operator(
    circuit: Circuit, layout: RegisterLayout, assignment: dict[str, str]
) -> tuple[np.ndarray, float]:
    """Operator induced on the unassigned blocks with ancillas fixed and restored.

    Every assigned block is set to its basis value; each data basis state is
    run through the circuit and projected back onto the assigned ancilla
    values. Returns the data-register matrix and the worst-case norm of the
    non-restored component (leakage).

    Assigned qubits that no gate targets only ever appear as controls, so a
    basis value there is provably restored (zero leakage) and each control on
    such a qubit either always or never fires. Those qubits are evaluated
    classically and left out of the dense state, which keeps encoding
    registers free: the induced amplitudes are bit-identical to a full-width
    run. Assigned qubits that gates do target stay in the simulation and
    their restoration is measured.
    """
    n = circuit.width
    if layout.width != n:
        raise ValueError(f"layout width {layout.width} != circuit width {n}")
    names = layout.names()
    for name, bits in assignment.items():
        if name not in names:
            raise ValueError(f"unknown block {name!r} in assignment")
        if len(bits) != layout.block_width(name) or set(bits) - {"0", "1"}:
            raise ValueError(f"bad assignment {bits!r} for block {name!r}")
    targeted = {g.target for g in circuit.gates}
    classical: dict[int, int] = {}
    kept_anc: list[tuple[int, int]] = []  # (qubit, bit) ancillas left in the state
    for name, bits in assignment.items():
        qubits = layout.qubits(name)
        if all(q not in targeted for q in qubits):
            classical.update(zip(qubits, map(int, bits)))
        else:
            kept_anc.extend(zip(qubits, map(int, bits)))
    data_qubits = [
        q for name, _ in layout.blocks if name not in assignment
        for q in layout.qubits(name)
    ]
    sub_circuit, position = _specialize_classical_controls(circuit, classical)
    if sub_circuit is None:  # everything classical and the circuit is empty
        return np.eye(1 << len(data_qubits), dtype=complex), 0.0
    w = sub_circuit.width
    anc_base = 0
    for q, bit in kept_anc:
        anc_base |= bit << (w - 1 - position[q])
    dim = 1 << len(data_qubits)
    offsets = np.zeros(dim, dtype=np.int64)
    for k, q in enumerate(data_qubits):
        bitpos = w - 1 - position[q]
        sel = (np.arange(dim) >> (len(data_qubits) - 1 - k)) & 1
        offsets |= sel.astype(np.int64) << bitpos
    indices = anc_base + offsets
    op = np.empty((dim, dim), dtype=complex)
    leakage = 0.0
    for i in range(dim):
        psi = np.zeros(1 << w, dtype=complex)
        psi[indices[i]] = 1.0
        out = run(sub_circuit, psi)
        col = out[indices]
        op[:, i] = col
        resid = float(np.vdot(out, out).real - np.vdot(col, col).real)
        leakage = max(leakage, math.sqrt(max(resid, 0.0)))
    return op, leakage


def _specialize_classical_controls(
    circuit: Circuit, classical: dict[int, int]
) -> tuple[Circuit | None, dict[int, int]]:
    """Evaluate controls on classically-fixed, never-targeted qubits.

    Returns the circuit on the remaining qubits plus the old-to-new qubit
    mapping; gates with a mismatched classical control are dropped, matched
    classical controls are removed. Returns (None, {}) when nothing remains.
    """
    remaining = [q for q in range(circuit.width) if q not in classical]
    if not remaining:
        return None, {}
    position = {q: k for k, q in enumerate(remaining)}
    gates = []
    for g in circuit.gates:
        assert g.target not in classical, "classical qubits must be control-only"
        fires = True
        ctrls = []
        for q, pol in g.controls:
            if q in classical:
                if classical[q] != pol:
                    fires = False
                    break
            else:
                ctrls.append((position[q], pol))
        if fires:
            gates.append(Gate(g.kind, position[g.target], tuple(ctrls), g.angle, g.dyadic))
    return Circuit(len(remaining), tuple(gates)), position


def format_state(state: np.ndarray) -> str:
    """State text format: header, then sparse '<index> <re> <im>' lines."""
    n = state_width(state)
    lines = [f"qubits {n}"]
    for i, z in enumerate(state):
        if abs(z) > _EMIT_EPS:
            lines.append(f"{i} {z.real!r} {z.imag!r}")
    return "\n".join(lines) + "\n"


def parse_state(text: str) -> np.ndarray:
    """Parse the state text format (omitted indices are zero)."""
    lines = [line.split("#", 1)[0].strip() for line in text.splitlines()]
    lines = [line for line in lines if line]
    if not lines:
        raise ValueError("empty state file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "qubits":
        raise ValueError(f"bad header line {lines[0]!r}")
    n = int(head[1])
    if n < 1:
        raise ValueError(f"qubit count must be positive, got {n}")
    psi = np.zeros(1 << n, dtype=complex)
    for line in lines[1:]:
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"bad state line {line!r}")
        idx = int(parts[0])
        if not 0 <= idx < len(psi):
            raise ValueError(f"basis index {idx} out of range for {n} qubits")
        psi[idx] = complex(float(parts[1]), float(parts[2]))
    if not np.all(np.isfinite(psi.view(float))):
        raise ValueError("state contains non-finite amplitudes")
    return psi


# ---------------------------------------------------------------------------
# gate lowering and kernel dispatch

_KIND_X, _KIND_2X2, _KIND_DIAG = 0, 1, 2


def _lower_gate(gate: Gate, n: int):
    tpos = n - 1 - gate.target
    tbit = np.int64(1 << tpos)
    cval = np.int64(0)
    positions = [tpos]
    for q, pol in gate.controls:
        pos = n - 1 - q
        positions.append(pos)
        if pol:
            cval |= np.int64(1 << pos)
    fixed = np.array(sorted(positions), dtype=np.int64)
    if gate.kind == "X":
        return (_KIND_X, tbit, fixed, cval, 0j, 0j, 0j, 0j)
    if gate.kind == "RZ":
        half = 0.5 * gate.rotation_angle
        return (_KIND_DIAG, tbit, fixed, cval,
                complex(math.cos(half), -math.sin(half)),
                complex(math.cos(half), math.sin(half)), 0j, 0j)
    if gate.kind == "P":
        a = gate.rotation_angle
        return (_KIND_DIAG, tbit, fixed, cval,
                1.0 + 0j, complex(math.cos(a), math.sin(a)), 0j, 0j)
    m = elementary_matrix("Ry", gate.rotation_angle)
    return (_KIND_2X2, tbit, fixed, cval, m[0, 0], m[0, 1], m[1, 0], m[1, 1])


@functools.lru_cache(maxsize=64)
def _lower_circuit_cached(circuit: Circuit, n: int):
    return tuple(_lower_gate(g, n) for g in circuit.gates)


def _lower_circuit(circuit: Circuit, n: int):
    try:
        return _lower_circuit_cached(circuit, n)
    except TypeError:  # unhashable (never for frozen circuits, but stay safe)
        return tuple(_lower_gate(g, n) for g in circuit.gates)


def _dispatch(psi: np.ndarray, low) -> None:
    kind, tbit, fixed, cval, a, b, c, d = low
    if kind == _KIND_X:
        _kernels.apply_x(psi, tbit, fixed, cval)
    elif kind == _KIND_DIAG:
        _kernels.apply_diag(psi, tbit, fixed, cval, a, b)
    else:
        _kernels.apply_2x2(psi, tbit, fixed, cval, a, b, c, d)
