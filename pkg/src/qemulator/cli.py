"""Command-line front end.

Exit status: 0 on success, 1 on a domain error (bad state, capacity, failed
factoring, unreadable file), 2 on a usage error.  Lines of output that carry
wall-clock measurements start with ``wall_time_s`` or ``fit``; everything
else is a deterministic function of the arguments and ``--seed``.
"""
from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import arithmetic, bench, oracle, phase, shor, transforms
from .errors import EmulatorError, ExhaustedTrials, InsufficientData
from .state import DenseState, format_state, load_state, measure, store_state


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer seed, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("seed must be non-negative")
    return value


def _sizes(text: str) -> list[int]:
    try:
        return bench.parse_sizes(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _emit_state(state, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(format_state(state))
    else:
        store_state(state, out)


def _cmd_arith(args) -> int:
    op = {"add": arithmetic.add, "mul": arithmetic.multiply, "exp": arithmetic.exponentiate}[args.command]
    a = load_state(args.a, sparse=args.sparse)
    b = load_state(args.b, sparse=args.sparse)
    _emit_state(op(a, b), args.output)
    return 0


def _cmd_transform(args) -> int:
    fn = transforms.qft if args.command == "qft" else transforms.inv_qft
    _emit_state(fn(load_state(args.input)), args.output)
    return 0


def _cmd_qpe(args) -> int:
    u = phase.load_unitary(args.unitary)
    phi = load_state(args.eigenvector)
    est = phase.estimate_phase(u, phi, args.bits)
    print(f"theta: {est.theta!r}")
    print(f"index: {est.index}")
    if args.output is not None:
        store_state(phase.qpe(u, phi, args.bits), args.output)
    return 0


def _cmd_measure(args) -> int:
    collapsed, index = measure(load_state(args.input), args.seed)
    print(f"index: {index}")
    if args.output is not None:
        store_state(collapsed, args.output)
    return 0


def _cmd_shor(args) -> int:
    cfg = shor.ShorConfig(args.X, args.a, args.m, args.n, args.seed)
    t0 = time.perf_counter()
    try:
        outcome, trials = shor.shors(cfg, args.max_trials)
    except ExhaustedTrials as exc:
        last = exc.last_outcome
        print(f"status: exhausted ({last.status.value if last else 'none'})")
        print(f"r_tilde: {last.r_tilde if last else None}")
        print("factors: none")
        print(f"trials: {args.max_trials}")
        print(f"wall_time_s: {time.perf_counter() - t0:.6f}")
        return 1
    elapsed = time.perf_counter() - t0
    print(f"status: {outcome.status.value}")
    print(f"r_tilde: {outcome.r_tilde}")
    print(f"factors: {outcome.factors[0]} {outcome.factors[1]}")
    print(f"trials: {trials}")
    print(f"wall_time_s: {elapsed:.6f}")
    return 0


def _cmd_bench(args) -> int:
    sweep = bench.run_benchmark(
        args.op, args.sizes, args.trials, args.seed, sparse_qubits=args.sparse_qubits
    )
    text = bench.format_csv(sweep.records)
    if args.csv is None:
        sys.stdout.write(text)
    else:
        Path(args.csv).write_text(text)
        print(f"records: {len(sweep.records)}")
    for size, reason in sweep.skipped.items():
        print(f"skipped: n={size}: {reason}")
    if args.fit:
        try:
            fit = bench.fit_exponential(sweep.records)
        except InsufficientData as exc:
            print(f"fit: unavailable ({exc})")
        else:
            print(f"fit: seconds ~ {fit.c:.4g} * 2^({fit.k:.4f} n), log2-mse {fit.mse:.3g}")
    return 0


def _cmd_oracle(args) -> int:
    if args.oracle_command == "qft":
        s = load_state(args.input)
        n = s.num_qubits
        if n is None:
            raise EmulatorError(f"state length {len(s)} is not a power of two")
        c = oracle.qft_circuit(n)
        if args.inverse:
            c = c.inverse()
        _emit_state(oracle.apply_circuit(c, s), args.output)
    elif args.oracle_command == "qpe":
        u = phase.load_unitary(args.unitary)
        dist = oracle.qpe_distribution(u, args.bits)
        mode = int(np.argmax(dist))
        print(f"modal_index: {mode}")
        print(f"probability: {float(dist[mode]):.12f}")
    elif args.oracle_command == "dft":
        s = load_state(args.input)
        y = oracle.naive_dft(s.amplitudes, "inverse" if args.inverse else "forward")
        _emit_state(DenseState(y), args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qemulator", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    for name, helptext in (("add", "superposed sum"), ("mul", "superposed product"), ("exp", "superposed power")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("a", type=Path, help="first operand state file")
        sp.add_argument("b", type=Path, help="second operand state file")
        sp.add_argument("-o", "--output", type=Path, help="output state file (default: stdout)")
        sp.add_argument("--sparse", action="store_true", help="use the sparse backend")
        sp.set_defaults(func=_cmd_arith)

    for name in ("qft", "iqft"):
        sp = sub.add_parser(name, help=f"{'inverse ' if name == 'iqft' else ''}quantum Fourier transform")
        sp.add_argument("input", type=Path)
        sp.add_argument("-o", "--output", type=Path)
        sp.set_defaults(func=_cmd_transform)

    sp = sub.add_parser("qpe", help="phase estimation for a unitary and eigenvector")
    sp.add_argument("unitary", type=Path)
    sp.add_argument("eigenvector", type=Path)
    sp.add_argument("--bits", type=_positive_int, required=True)
    sp.add_argument("-o", "--output", type=Path, help="write the one-hot result state here")
    sp.set_defaults(func=_cmd_qpe)

    sp = sub.add_parser("measure", help="projective measurement of a state")
    sp.add_argument("input", type=Path)
    sp.add_argument("--seed", type=_seed, required=True)
    sp.add_argument("-o", "--output", type=Path)
    sp.set_defaults(func=_cmd_measure)

    sp = sub.add_parser("shor", help="factor X with Shor's algorithm")
    sp.add_argument("--X", type=int, required=True)
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--m", type=_positive_int, required=True)
    sp.add_argument("--n", type=_positive_int, required=True)
    sp.add_argument("--seed", type=_seed, default=0)
    sp.add_argument("--max-trials", type=_positive_int, default=10)
    sp.set_defaults(func=_cmd_shor)

    sp = sub.add_parser("bench", help="time an operation across sizes")
    sp.add_argument("--op", choices=sorted(bench.OPERATIONS), required=True)
    sp.add_argument("--sizes", type=_sizes, required=True, help="'lo:hi', 'lo:hi:step' or 'a,b,c'")
    sp.add_argument("--trials", type=_positive_int, default=10)
    sp.add_argument("--seed", type=_seed, default=0)
    sp.add_argument("--csv", type=Path, help="write records here instead of stdout")
    sp.add_argument("--sparse-qubits", type=_positive_int, default=10)
    sp.add_argument("--fit", action="store_true", help="print an exponential fit of the means")
    sp.set_defaults(func=_cmd_bench)

    sp = sub.add_parser("oracle", help="gate-level reference paths (debugging)")
    osub = sp.add_subparsers(dest="oracle_command", required=True)
    op = osub.add_parser("qft", help="run the QFT circuit on a state")
    op.add_argument("input", type=Path)
    op.add_argument("-o", "--output", type=Path)
    op.add_argument("--inverse", action="store_true")
    op = osub.add_parser("qpe", help="counting-register distribution of the QPE circuit")
    op.add_argument("unitary", type=Path)
    op.add_argument("--bits", type=_positive_int, required=True)
    op = osub.add_parser("dft", help="direct-summation DFT of the amplitudes")
    op.add_argument("input", type=Path)
    op.add_argument("-o", "--output", type=Path)
    op.add_argument("--inverse", action="store_true")
    sp.set_defaults(func=_cmd_oracle)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (EmulatorError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
