"""Gate-level state-vector simulator and direct-summation DFT.

Independent reference paths for checking the emulator.  Nothing here is used
by the emulator itself.

Bit ordering: qubit 0 is the most significant bit of the basis index, so on
three qubits ``X`` on qubit 0 maps ``|000>`` (index 0) to ``|100>`` (index 4).
This matches how the arithmetic module reads indices as integers.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import IndexOutOfRange, NotNormalized
from .state import NORM_TOL, DenseState


class GateKind(enum.Enum):
    H = "H"
    X = "X"
    PHASE = "PHASE"
    CPHASE = "CPHASE"
    SWAP = "SWAP"
    CU = "CU"


_H = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)


@dataclass(frozen=True, eq=False)
class Gate:
    kind: GateKind
    targets: tuple[int, ...]
    controls: tuple[int, ...] = ()
    theta: float = 0.0
    matrix: np.ndarray | None = None

    def inverse(self) -> Gate:
        if self.kind in (GateKind.PHASE, GateKind.CPHASE):
            return Gate(self.kind, self.targets, self.controls, -self.theta)
        if self.kind is GateKind.CU:
            return Gate(self.kind, self.targets, self.controls, matrix=self.matrix.conj().T)
        return self

    def __repr__(self) -> str:
        extra = f", theta={self.theta:.6g}" if self.kind in (GateKind.PHASE, GateKind.CPHASE) else ""
        return f"Gate({self.kind.value}, targets={self.targets}, controls={self.controls}{extra})"


def h(q: int) -> Gate:
    return Gate(GateKind.H, (q,))


def x(q: int) -> Gate:
    return Gate(GateKind.X, (q,))


def phase(q: int, theta: float) -> Gate:
    return Gate(GateKind.PHASE, (q,), theta=theta)


def cphase(control: int, target: int, theta: float) -> Gate:
    return Gate(GateKind.CPHASE, (target,), (control,), theta)


def swap(q0: int, q1: int) -> Gate:
    return Gate(GateKind.SWAP, (q0, q1))


def controlled_u(control: int, target: int, u) -> Gate:
    m = np.array(u, dtype=np.complex128)
    if m.shape != (2, 2):
        raise ValueError("controlled-U gates take a 2x2 unitary")
    return Gate(GateKind.CU, (target,), (control,), matrix=m)


@dataclass
class Circuit:
    num_qubits: int
    gates: list[Gate] = field(default_factory=list)

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ValueError("a circuit needs at least one qubit")
        for g in self.gates:
            self._check(g)

    def _check(self, g: Gate) -> None:
        qubits = g.targets + g.controls
        for q in qubits:
            if not 0 <= q < self.num_qubits:
                raise IndexOutOfRange(f"qubit {q} outside [0, {self.num_qubits}) in {g!r}")
        if len(set(qubits)) != len(qubits):
            raise ValueError(f"controls and targets must be distinct in {g!r}")

    def append(self, g: Gate) -> Circuit:
        self._check(g)
        self.gates.append(g)
        return self

    def extend(self, gates) -> Circuit:
        for g in gates:
            self.append(g)
        return self

    def inverse(self) -> Circuit:
        return Circuit(self.num_qubits, [g.inverse() for g in reversed(self.gates)])

    def count(self, kind: GateKind) -> int:
        return sum(g.kind is kind for g in self.gates)


def _axis_view(psi: np.ndarray, n: int, fixed: dict[int, int], free: int) -> np.ndarray:
    """View of psi with the qubits in ``fixed`` pinned and ``free`` moved to axis 0."""
    idx = [slice(None)] * n
    for q, bit in fixed.items():
        idx[q] = bit
    sub = psi.reshape((2,) * n)[tuple(idx)]
    axis = free - sum(1 for q in fixed if q < free)
    return np.moveaxis(sub, axis, 0)


def _apply_1q(psi, n, target, u, controls=()):
    v = _axis_view(psi, n, {c: 1 for c in controls}, target)
    a0, a1 = v[0].copy(), v[1].copy()
    v[0] = u[0, 0] * a0 + u[0, 1] * a1
    v[1] = u[1, 0] * a0 + u[1, 1] * a1


def _apply_gate(psi: np.ndarray, n: int, g: Gate) -> None:
    kind = g.kind
    if kind is GateKind.H:
        _apply_1q(psi, n, g.targets[0], _H)
    elif kind is GateKind.X:
        _apply_1q(psi, n, g.targets[0], _X)
    elif kind in (GateKind.PHASE, GateKind.CPHASE):
        t = g.targets[0]
        v = _axis_view(psi, n, {c: 1 for c in g.controls}, t)
        v[1] *= np.exp(1j * g.theta)
    elif kind is GateKind.SWAP:
        q0, q1 = g.targets
        t = psi.reshape((2,) * n)
        i01 = [slice(None)] * n
        i10 = [slice(None)] * n
        i01[q0], i01[q1] = 0, 1
        i10[q0], i10[q1] = 1, 0
        i01, i10 = tuple(i01), tuple(i10)
        tmp = t[i01].copy()
        t[i01] = t[i10]
        t[i10] = tmp
    elif kind is GateKind.CU:
        _apply_1q(psi, n, g.targets[0], g.matrix, g.controls)
    else:  # pragma: no cover
        raise ValueError(f"unknown gate kind {kind}")


def apply_circuit(c: Circuit, initial: DenseState) -> DenseState:
    """Evolve ``initial`` gate by gate on a private copy of the amplitudes."""
    n = c.num_qubits
    if len(initial) != 1 << n:
        raise ValueError(f"state length {len(initial)} != 2**{n}")
    if not initial.is_normalized(NORM_TOL):
        raise NotNormalized("initial state must be normalized")
    psi = np.array(initial.amplitudes, dtype=np.complex128)
    for g in c.gates:
        c._check(g)
        _apply_gate(psi, n, g)
    return DenseState._adopt(psi)


def _qft_gates(qubits: list[int]) -> list[Gate]:
    gates = []
    k = len(qubits)
    for i in range(k):
        gates.append(h(qubits[i]))
        for j in range(i + 1, k):
            gates.append(cphase(qubits[j], qubits[i], 2 * np.pi / 2 ** (j - i + 1)))
    for i in range(k // 2):
        gates.append(swap(qubits[i], qubits[k - 1 - i]))
    return gates


def qft_circuit(n: int) -> Circuit:
    """Textbook QFT: Hadamards, controlled phases, then reversing swaps."""
    if not 1 <= n <= 12:
        raise ValueError("qft_circuit supports 1 <= n <= 12")
    return Circuit(n, _qft_gates(list(range(n))))


def qpe_circuit(u, bits: int) -> Circuit:
    """Phase estimation of a 2x2 unitary on ``bits`` counting qubits.

    Counting qubits are 0..bits-1 (qubit 0 most significant); the eigenvector
    qubit is the last one and is flipped to |1> by an X gate, which is the
    eigenvector of diag(1, e^{i z}).
    """
    if not 1 <= bits <= 12:
        raise ValueError("qpe_circuit supports 1 <= bits <= 12")
    m = np.array(getattr(u, "matrix", u), dtype=np.complex128)
    if m.shape != (2, 2):
        raise ValueError("qpe_circuit takes a 2x2 unitary")
    target = bits
    c = Circuit(bits + 1)
    c.append(x(target))
    for q in range(bits):
        c.append(h(q))
    for q in range(bits):
        power = np.linalg.matrix_power(m, 2 ** (bits - 1 - q))
        c.append(controlled_u(q, target, power))
    c.extend(g.inverse() for g in reversed(_qft_gates(list(range(bits)))))
    return c


def register_distribution(state: DenseState, num_qubits: int, qubits: list[int]) -> np.ndarray:
    """Marginal probabilities of the listed qubits (first listed = most significant)."""
    probs = state.probabilities().reshape((2,) * num_qubits)
    others = tuple(q for q in range(num_qubits) if q not in qubits)
    marg = probs.sum(axis=others) if others else probs
    # remaining axes are in ascending qubit order; reorder to the requested order
    order = sorted(qubits)
    marg = np.transpose(marg, [order.index(q) for q in qubits])
    return marg.reshape(-1)


def qpe_distribution(u, bits: int) -> np.ndarray:
    """Counting-register outcome probabilities of :func:`qpe_circuit`."""
    c = qpe_circuit(u, bits)
    out = apply_circuit(c, DenseState.basis(0, 1 << c.num_qubits))
    return register_distribution(out, c.num_qubits, list(range(bits)))


def naive_dft(x, direction: str = "forward") -> np.ndarray:
    """Literal O(N^2) summation; same conventions as ``fft_kernel``.

    Works for any N >= 1.  Exponents use (j*k) mod N in integer arithmetic
    so the phase angles stay accurate for large N.
    """
    x = np.asarray(x, dtype=np.complex128)
    n = x.size
    if direction == "forward":
        sign = -1.0
    elif direction == "inverse":
        sign = 1.0
    else:
        raise ValueError("direction must be 'forward' or 'inverse'")
    j = np.arange(n, dtype=np.int64)
    out = np.empty(n, dtype=np.complex128)
    rows = max(1, (1 << 20) // max(n, 1))
    for start in range(0, n, rows):
        k = j[start : start + rows]
        w = np.exp(sign * 2j * np.pi * (np.outer(k, j) % n) / n)
        out[start : start + rows] = w @ x
    if direction == "inverse":
        out /= n
    return out
