from __future__ import annotations

from qemulator.state import DenseState, SparseState, normalize


def random_state(num_qubits: int, rng) -> DenseState:
    n = 1 << num_qubits
    return normalize(DenseState(rng.normal(size=n) + 1j * rng.normal(size=n)))


def random_sparse(num_qubits: int, nnz: int, rng) -> SparseState:
    n = 1 << num_qubits
    idx = rng.choice(n, size=min(nnz, n), replace=False)
    vals = rng.normal(size=idx.size) + 1j * rng.normal(size=idx.size)
    return normalize(SparseState(n, dict(zip(idx.tolist(), vals.tolist()))))


# One "PASS/FAIL/SKIP <n>. <title>" line per acceptance criterion, printed by
# the terminal-summary hook in conftest.py.
ACCEPTANCE_LINES: list[str] = []
