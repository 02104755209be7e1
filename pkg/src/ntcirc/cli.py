"""Batch command-line front end.

Subcommands: build (emit circuits and encodings), run (execute a circuit on a
state file), verify (measure distances/leakage against the matrix oracles and
check the applicable bounds), compile (factor a unitary into an encoded
program file). Exit codes: 0 success / within bounds, 1 verification failure,
2 usage or input error.
"""
from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import decompose, encoders, neartrivial, qmath, simulator
from .circuit import RegisterLayout, format_circuit, parse_circuit

_TWO_PI = 2.0 * math.pi


def console_main() -> None:
    sys.exit(main())


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ntcirc",
        description="Universal circuits for near-trivial transformations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pb = sub.add_parser("build", help="emit a circuit in the text format")
    pb.add_argument("target", choices=["ry", "rz", "u1q", "ca", "cb", "cu"])
    pb.add_argument("--n", type=int, help="register width for ca/cu")
    pb.add_argument("--m", type=int, help="encoding width")
    pb.add_argument("--theta", type=float, help="rotation angle in radians")
    pb.add_argument("--theta-prime", type=float, help="phase angle in radians")
    pb.add_argument("--sign", choices=["+", "-"], default="+")
    pb.add_argument("--matrix", help="matrix file for u1q")
    pb.add_argument("--out", "-o", help="circuit output file (default stdout)")
    pb.set_defaults(func=cmd_build)

    pr = sub.add_parser("run", help="run a circuit file on a state file")
    pr.add_argument("circuit")
    pr.add_argument("state")
    pr.set_defaults(func=cmd_run)

    pv = sub.add_parser("verify", help="verify a construction against its oracle")
    pv.add_argument("mode", choices=["neartrivial", "u1q", "twolevel", "compile"])
    pv.add_argument("--n", type=int)
    pv.add_argument("--m", type=int)
    pv.add_argument("--x", help="bit string")
    pv.add_argument("--y", help="bit string")
    pv.add_argument("--theta", type=float)
    pv.add_argument("--theta-prime", type=float)
    pv.add_argument("--matrix", help="matrix file")
    pv.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    pv.set_defaults(func=cmd_verify)

    pc = sub.add_parser("compile", help="factor a unitary into encoded programs")
    pc.add_argument("matrix")
    pc.add_argument("--m", type=int, required=True)
    pc.add_argument("--out", "-o", help="program output file (default stdout)")
    pc.set_defaults(func=cmd_compile)
    return parser


# ---------------------------------------------------------------------------
# build


def cmd_build(args) -> int:
    target = args.target
    encoding = None
    if target in ("ry", "rz"):
        _need(args, "m")
        circ = encoders.build_rotation_encoder(target[1], args.sign, args.m)
        if args.theta is not None:
            encoding = encoders.encode_angle(args.theta, args.m).bits
    elif target == "u1q":
        _need(args, "m", "matrix")
        u = _load_matrix(args.matrix)
        circ = encoders.build_single_qubit_universal(args.m)
        encoding = "".join(e.bits for e in encoders.encode_single_qubit(u, args.m))
    elif target == "ca":
        _need(args, "n")
        circ = neartrivial.build_ca(args.n)
    elif target == "cb":
        if args.m is not None:
            circ = neartrivial.build_cb_universal(args.m)
        else:
            _need(args, "theta", "theta_prime")
            circ = neartrivial.build_cb_exact(args.theta, args.theta_prime)
    else:  # cu
        _need(args, "n")
        if args.m is not None:
            circ = neartrivial.build_cu_universal(args.n, args.m)
        else:
            _need(args, "theta", "theta_prime")
            circ = neartrivial.build_cu_exact(args.n, args.theta, args.theta_prime)
    text = format_circuit(circ)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if encoding is not None:
        print(f"encoding: {encoding}")
    return 0


# ---------------------------------------------------------------------------
# run


def cmd_run(args) -> int:
    with open(args.circuit) as fh:
        circ = parse_circuit(fh.read())
    with open(args.state) as fh:
        state = simulator.parse_state(fh.read())
    out = simulator.run(circ, state)
    sys.stdout.write(simulator.format_state(out))
    return 0


# ---------------------------------------------------------------------------
# verify


def cmd_verify(args) -> int:
    checks = {
        "neartrivial": _verify_neartrivial,
        "u1q": _verify_u1q,
        "twolevel": _verify_twolevel,
        "compile": _verify_compile,
    }
    failures = checks[args.mode](args)
    if failures:
        for name in failures:
            print(f"FAIL {name}")
        return 1
    print("PASS")
    return 0


def _verify_neartrivial(args) -> list[str]:
    _need(args, "n", "m", "x", "y")
    theta = args.theta if args.theta is not None else 0.0
    theta_prime = args.theta_prime if args.theta_prime is not None else 0.0
    spec = neartrivial.NearTrivialSpec(args.x, args.y, theta, theta_prime)
    if spec.n != args.n:
        raise ValueError(f"bit strings are not {args.n} bits wide")
    n, m = args.n, args.m
    program = neartrivial.encode_spec(spec, m)
    circ = neartrivial.build_cu_universal(n, m)
    layout = RegisterLayout.for_cu(n, m)
    assignment = {
        "x": program.x_bits, "y": program.y_bits,
        "b": program.b_init, "r": program.r.bits,
    }
    op, leakage = simulator.effective_data_operator(circ, layout, assignment)
    scale = 2.0 if spec.is_phase else 1.0
    decoded_angle = program.r.decode(scale * _TWO_PI)
    if spec.is_phase:
        decoded = neartrivial.NearTrivialSpec(spec.x, spec.y, theta_prime=decoded_angle)
    else:
        decoded = neartrivial.NearTrivialSpec(spec.x, spec.y, theta=decoded_angle)
    d_dec, _ = qmath.distance_up_to_global_phase(op, qmath.near_trivial_matrix(decoded, n))
    d_exact, _ = qmath.distance_up_to_global_phase(op, qmath.near_trivial_matrix(spec, n))
    bound = scale * math.pi * 2.0 ** (-m)
    rng = np.random.default_rng(args.seed)
    min_fid = 1.0
    oracle = qmath.near_trivial_matrix(spec, n)
    for _ in range(5):
        psi = rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n)
        psi /= np.linalg.norm(psi)
        out = neartrivial.apply_near_trivial(spec, psi, m)
        min_fid = min(min_fid, abs(np.vdot(oracle @ psi, out)))
    print(f"gates: {len(circ)}")
    print(f"leakage: {leakage:.3e}")
    print(f"distance-to-decoded (up to phase): {d_dec:.3e}")
    print(f"distance-to-exact (up to phase): {d_exact:.3e}  bound: {bound:.3e}")
    print(f"min state fidelity over 5 seeded states: {min_fid:.12f}")
    failures = []
    if leakage > 1e-10:
        failures.append("leakage")
    if d_dec > 1e-10:
        failures.append("decoded-distance")
    if d_exact > bound:
        failures.append("exact-distance-bound")
    if min_fid < 1.0 - 1e-6:
        failures.append("state-fidelity")
    return failures


def _verify_u1q(args) -> list[str]:
    _need(args, "m", "matrix")
    u = _load_matrix(args.matrix)
    m = args.m
    circ = encoders.build_single_qubit_universal(m)
    e1, e2, e3 = encoders.encode_single_qubit(u, m)
    layout = RegisterLayout((("d", 1), ("e1", m), ("e2", m), ("e3", m)))
    assignment = {"e1": e1.bits, "e2": e2.bits, "e3": e3.bits}
    op, leakage = simulator.effective_data_operator(circ, layout, assignment)
    dist, _ = qmath.distance_up_to_global_phase(op, u)
    bound = 3.0 * math.pi * 2.0 ** (-(m + 1)) + 1e-10
    print(f"encoding: {e1.bits}{e2.bits}{e3.bits}")
    print(f"leakage: {leakage:.3e}")
    print(f"distance (up to phase): {dist:.3e}  bound: {bound:.3e}")
    failures = []
    if leakage > 1e-12:
        failures.append("leakage")
    if dist > bound:
        failures.append("distance-bound")
    return failures


def _verify_twolevel(args) -> list[str]:
    _need(args, "x", "y", "matrix")
    u = _load_matrix(args.matrix)
    if u.shape != (2, 2):
        raise ValueError("two-level verification needs a 2x2 matrix")
    circ = decompose.build_two_level_circuit(args.x, args.y, u)
    got = simulator.circuit_unitary(circ)
    want = qmath.embed_two_level(u, args.x, args.y, len(args.x))
    dist = qmath.operator_distance(got, want)
    print(f"gates: {len(circ)}")
    print(f"distance: {dist:.3e}  bound: 1e-10")
    return ["distance"] if dist > 1e-10 else []


def _verify_compile(args) -> list[str]:
    _need(args, "m", "matrix")
    u = _load_matrix(args.matrix)
    d = u.shape[0]
    n = _log2_exact(d)
    m = args.m
    programs = decompose.compile_unitary(u, n, m)
    circ = neartrivial.build_cu_universal(n, m)
    layout = RegisterLayout.for_cu(n, m)
    total = np.eye(d, dtype=complex)
    worst_leak = 0.0
    for prog in programs:
        assignment = {
            "x": prog.x_bits, "y": prog.y_bits, "b": prog.b_init, "r": prog.r.bits,
        }
        op, leakage = simulator.effective_data_operator(circ, layout, assignment)
        worst_leak = max(worst_leak, leakage)
        total = op @ total
    dist, _ = qmath.distance_up_to_global_phase(total, u)
    bound = len(programs) * _TWO_PI * 2.0 ** (-m)
    print(f"factors: {len(programs)}")
    print(f"leakage: {worst_leak:.3e}")
    print(f"distance (up to phase): {dist:.3e}  bound: {bound:.3e}")
    failures = []
    if worst_leak > 1e-10:
        failures.append("leakage")
    if dist > bound:
        failures.append("distance-bound")
    return failures


# ---------------------------------------------------------------------------
# compile


def cmd_compile(args) -> int:
    u = _load_matrix(args.matrix)
    n = _log2_exact(u.shape[0])
    programs = decompose.compile_unitary(u, n, args.m)
    header = f"# compiled d={u.shape[0]} m={args.m} factors={len(programs)}\n"
    text = header + neartrivial.format_programs(programs)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# helpers


def _need(args, *names) -> None:
    for name in names:
        if getattr(args, name, None) is None:
            flag = "--" + name.replace("_", "-")
            raise ValueError(f"{flag} is required for this command")


def _load_matrix(path: str) -> np.ndarray:
    with open(path) as fh:
        u = qmath.parse_matrix(fh.read())
    if not qmath.is_unitary(u):
        raise ValueError(f"matrix in {path} is not unitary within 1e-10")
    return u


def _log2_exact(d: int) -> int:
    n = d.bit_length() - 1
    if d < 2 or (1 << n) != d:
        raise ValueError(f"dimension {d} is not a power of two >= 2")
    return n


if __name__ == "__main__":
    console_main()
