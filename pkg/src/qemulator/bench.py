"""Benchmark harness: time operations over problem sizes and fit y = c * 2**(k*n)."""
from __future__ import annotations

import csv
import io
import time
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import arithmetic, oracle, phase, transforms
from .errors import CapacityExceeded, InsufficientData
from .state import DenseState, SparseState, normalize

CSV_HEADER = ("op", "n", "trial", "seconds")


@dataclass(frozen=True)
class BenchRecord:
    op: str
    n: int
    trial: int
    seconds: float

    def __post_init__(self):
        if not self.seconds > 0:
            raise ValueError(f"seconds must be positive, got {self.seconds}")


@dataclass(frozen=True)
class FitResult:
    """Model seconds = c * 2**(k * n); mse is in log2 space."""

    c: float
    k: float
    mse: float

    def predict(self, n: float) -> float:
        return self.c * 2.0 ** (self.k * n)


@dataclass
class Sweep:
    """Timed rows plus the sizes that were skipped and why."""

    op: str
    records: list[BenchRecord] = field(default_factory=list)
    skipped: dict[int, str] = field(default_factory=dict)


def random_dense_state(num_qubits: int, rng: np.random.Generator) -> DenseState:
    n = 1 << num_qubits
    return normalize(DenseState._adopt(rng.normal(size=n) + 1j * rng.normal(size=n)))


def random_basis_state(num_qubits: int, rng: np.random.Generator) -> DenseState:
    n = 1 << num_qubits
    return DenseState.basis(int(rng.integers(n)), n)


def random_sparse_state(num_qubits: int, nnz: int, rng: np.random.Generator) -> SparseState:
    n = 1 << num_qubits
    nnz = min(nnz, n)
    idx = rng.choice(n, size=nnz, replace=False) if n <= 1 << 24 else _distinct(rng, n, nnz)
    vals = rng.normal(size=nnz) + 1j * rng.normal(size=nnz)
    return normalize(SparseState(n, {int(i): complex(v) for i, v in zip(idx, vals)}))


def _distinct(rng, n, k):
    seen: set[int] = set()
    while len(seen) < k:
        seen.add(int(rng.integers(n)))
    return sorted(seen)


def _planted_unitary(num_qubits: int, rng: np.random.Generator):
    """Random unitary V diag(e^{2 pi i t}) V^dagger and its first eigenvector."""
    m = 1 << num_qubits
    z = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
    v, r = np.linalg.qr(z)
    v = v * (np.diag(r) / np.abs(np.diag(r)))
    eig = np.exp(2j * np.pi * rng.random(m))
    u = phase.UnitaryMatrix((v * eig) @ v.conj().T)
    return u, DenseState(v[:, 0])


# Each factory takes (size, rng, options) and returns a zero-argument callable.
# Input generation happens in the factory, outside the timed region.
def _binary(gen, op):
    def factory(size, rng, opts):
        a, b = gen(size, rng, opts), gen(size, rng, opts)
        cap = opts.get("cap")
        return lambda: op(a, b, cap=cap)

    return factory


def _dense(size, rng, opts):
    return random_dense_state(size, rng)


def _classical(size, rng, opts):
    return random_basis_state(size, rng)


def _sparse(size, rng, opts):
    return random_sparse_state(opts.get("sparse_qubits", 10), size, rng)


def _unary(op):
    def factory(size, rng, opts):
        s = random_dense_state(size, rng)
        return lambda: op(s)

    return factory


def _qft_circuit(size, rng, opts):
    c = oracle.qft_circuit(size)
    s = random_dense_state(size, rng)
    return lambda: oracle.apply_circuit(c, s)


def _qpe_in_b(size, rng, opts):
    # one fixed U per sweep so that only b varies
    u = phase.UnitaryMatrix.diagonal_phase(opts["fixed_angle"])
    phi = DenseState([0.0, 1.0])
    return lambda: phase.qpe(u, phi, size)


def _qpe_circuit(size, rng, opts):
    u = phase.UnitaryMatrix.diagonal_phase(opts["fixed_angle"])
    return lambda: oracle.qpe_distribution(u, size)


def _qpe_in_n(size, rng, opts):
    u, phi = _planted_unitary(size, rng)
    return lambda: phase.qpe(u, phi, 16)


OPERATIONS: dict[str, Callable] = {
    "add": _binary(_dense, arithmetic.add),
    "mul": _binary(_dense, arithmetic.multiply),
    "exp-dense": _binary(_dense, arithmetic.exponentiate),
    "add-classical": _binary(_classical, arithmetic.add),
    "add-sparse": _binary(_sparse, arithmetic.add),
    "mul-sparse": _binary(_sparse, arithmetic.multiply),
    "exp-sparse": _binary(_sparse, arithmetic.exponentiate),
    "qft": _unary(transforms.qft),
    "iqft": _unary(transforms.inv_qft),
    "qft-circuit": _qft_circuit,
    "qpe-in-b": _qpe_in_b,
    "qpe-circuit": _qpe_circuit,
    "qpe-in-n": _qpe_in_n,
}


def run_benchmark(
    op: str,
    sizes,
    trials: int,
    seed: int,
    *,
    cap: int | None = None,
    sparse_qubits: int = 10,
) -> Sweep:
    """Time ``op`` once per (size, trial) on freshly seeded random inputs.

    ``size`` is the qubit count for dense ops, the precision b for
    qpe-in-b / qpe-circuit, and the number of nonzeros for sparse sweeps
    (on ``sparse_qubits``-qubit operands).  Sizes that exceed the memory cap
    are recorded in ``Sweep.skipped`` and the sweep continues.  Each size
    gets one untimed warm-up call before its timed trials.
    """
    if op not in OPERATIONS:
        raise ValueError(f"unknown op {op!r}; choose from {', '.join(sorted(OPERATIONS))}")
    if trials < 1:
        raise ValueError("trials must be positive")
    factory = OPERATIONS[op]
    angle_rng = np.random.default_rng([seed, 0xF1])
    opts = {"cap": cap, "sparse_qubits": sparse_qubits, "fixed_angle": float(angle_rng.random())}
    sweep = Sweep(op)
    for size in sizes:
        try:
            factory(size, np.random.default_rng([seed, size, -1 % 2**32]), opts)()
        except CapacityExceeded as exc:
            sweep.skipped[size] = str(exc)
            continue
        for trial in range(trials):
            rng = np.random.default_rng([seed, size, trial])
            try:
                call = factory(size, rng, opts)
                t0 = time.perf_counter()
                call()
                elapsed = time.perf_counter() - t0
            except CapacityExceeded as exc:
                sweep.skipped[size] = str(exc)
                break
            sweep.records.append(BenchRecord(op, size, trial, elapsed))
    return sweep


def mean_by_size(records) -> dict[int, float]:
    groups = defaultdict(list)
    for r in records:
        groups[r.n].append(r.seconds)
    return {n: sum(v) / len(v) for n, v in sorted(groups.items())}


def fit_exponential(records) -> FitResult:
    """Least-squares line through (n, log2(mean seconds at n))."""
    means = mean_by_size(records)
    if len(means) < 3:
        raise InsufficientData(f"need at least 3 distinct sizes, got {len(means)}")
    ns = np.array(list(means), dtype=float)
    ys = np.log2(np.array(list(means.values()), dtype=float))
    k, intercept = np.polyfit(ns, ys, 1)
    resid = ys - (k * ns + intercept)
    return FitResult(c=float(2.0**intercept), k=float(k), mse=float(np.mean(resid**2)))


def format_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow((r.op, r.n, r.trial, f"{r.seconds:.9g}"))
    return buf.getvalue()


def read_csv(text: str) -> list[BenchRecord]:
    rows = csv.DictReader(io.StringIO(text))
    if tuple(rows.fieldnames or ()) != CSV_HEADER:
        raise ValueError(f"expected header {','.join(CSV_HEADER)}")
    return [BenchRecord(r["op"], int(r["n"]), int(r["trial"]), float(r["seconds"])) for r in rows]


def parse_sizes(text: str) -> list[int]:
    """'2:13' (inclusive), '2:13:2' (with step) or '4,12,20'."""
    text = text.strip()
    if ":" in text:
        parts = [int(p) for p in text.split(":")]
        if len(parts) not in (2, 3):
            raise ValueError(f"bad size range {text!r}")
        lo, hi = parts[0], parts[1]
        step = parts[2] if len(parts) == 3 else 1
        if step < 1 or hi < lo:
            raise ValueError(f"bad size range {text!r}")
        return list(range(lo, hi + 1, step))
    sizes = [int(p) for p in text.split(",") if p.strip()]
    if not sizes:
        raise ValueError("no sizes given")
    return sizes
