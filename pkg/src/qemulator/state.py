"""Dense and sparse state vectors, normalization, measurement and file I/O.

Text format shared by both kinds of state::

    STATE <N>
    <index> <re> <im>
    ...

One row per nonzero amplitude, indices strictly increasing, omitted indices
are zero.  ``N`` and the indices may be written as ``base^exp`` for lengths
too large to spell out (sparse exponentiation results).
"""
from __future__ import annotations

import math
import os
from collections.abc import Mapping
from dataclasses import dataclass
from pathlib import Path
from types import MappingProxyType

import numpy as np

from .bigindex import BigInt, Power, format_bigint, parse_bigint
from .errors import CapacityExceeded, LengthMismatch, NotNormalized, ParseError, ZeroVector

PRUNE_TOL = 1e-15
NORM_TOL = 1e-6
DEFAULT_MEM_CAP = 1 << 28  # complex128 amplitudes, 4 GiB
MEM_CAP_ENV = "UNIQUE_MEM_CAP"


def dense_cap() -> int:
    """Largest dense array (in amplitudes) an operation may allocate."""
    raw = os.environ.get(MEM_CAP_ENV)
    if raw is None or not raw.strip():
        return DEFAULT_MEM_CAP
    cap = parse_bigint(raw.strip())
    if not isinstance(cap, int) or cap < 1:
        raise ValueError(f"{MEM_CAP_ENV} must be a positive integer, got {raw!r}")
    return cap


def check_capacity(length: BigInt, cap: int | None = None) -> int:
    """Return ``length`` as an int, or raise if it exceeds the dense cap."""
    limit = dense_cap() if cap is None else cap
    if isinstance(length, Power) or length > limit:
        raise CapacityExceeded(
            f"dense length {format_bigint(length)} exceeds cap of {limit} amplitudes; "
            "use the sparse backend"
        )
    return int(length)


@dataclass(frozen=True, eq=False)
class DenseState:
    """Contiguous array of complex amplitudes. The array is read-only."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128)
        if amps.ndim != 1 or amps.size < 1:
            raise ValueError("a state needs a non-empty 1-D amplitude array")
        if not np.isfinite(amps).all():
            raise ValueError("amplitudes must be finite")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def _adopt(cls, amps: np.ndarray) -> DenseState:
        # Takes ownership of a freshly computed array without copying it.
        amps = np.ascontiguousarray(amps, dtype=np.complex128)
        amps.setflags(write=False)
        obj = object.__new__(cls)
        object.__setattr__(obj, "amplitudes", amps)
        return obj

    @classmethod
    def basis(cls, index: int, length: int) -> DenseState:
        amps = np.zeros(length, dtype=np.complex128)
        amps[index] = 1.0
        return cls._adopt(amps)

    def __len__(self) -> int:
        return self.amplitudes.size

    @property
    def num_qubits(self) -> int | None:
        n = len(self)
        return n.bit_length() - 1 if n & (n - 1) == 0 else None

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(float(np.vdot(self.amplitudes, self.amplitudes).real) - 1.0) <= tol

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def support(self) -> np.ndarray:
        return np.flatnonzero(np.abs(self.amplitudes) > PRUNE_TOL)

    def to_sparse(self) -> SparseState:
        amps = self.amplitudes
        idx = self.support()
        return SparseState(len(self), {int(i): complex(amps[i]) for i in idx})

    def __repr__(self) -> str:
        return f"DenseState(N={len(self)}, nnz={self.support().size})"


@dataclass(frozen=True, eq=False)
class SparseState:
    """Map index -> amplitude over a declared logical length.

    Amplitudes with magnitude <= 1e-15 are dropped on construction.  The
    logical length may be a :class:`~qemulator.bigindex.Power`.
    """

    logical_length: BigInt
    entries: Mapping

    def __post_init__(self):
        n = self.logical_length
        if isinstance(n, (np.integer,)):
            n = int(n)
        if not isinstance(n, (int, Power)) or n < 1:
            raise ValueError("logical_length must be a positive integer")
        kept = {}
        for idx, amp in self.entries.items():
            if isinstance(idx, np.integer):
                idx = int(idx)
            amp = complex(amp)
            if not (math.isfinite(amp.real) and math.isfinite(amp.imag)):
                raise ValueError("amplitudes must be finite")
            if abs(amp) <= PRUNE_TOL:
                continue
            if not (0 <= idx < n):
                raise IndexError(f"index {format_bigint(idx)} outside [0, {format_bigint(n)})")
            kept[idx] = amp
        object.__setattr__(self, "logical_length", n)
        object.__setattr__(self, "entries", MappingProxyType(kept))

    @classmethod
    def basis(cls, index: BigInt, length: BigInt) -> SparseState:
        return cls(length, {index: 1.0})

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def norm(self) -> float:
        return math.sqrt(math.fsum(abs(v) ** 2 for v in self.entries.values()))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(math.fsum(abs(v) ** 2 for v in self.entries.values()) - 1.0) <= tol

    def support(self) -> list:
        return sorted(self.entries)

    def to_dense(self, cap: int | None = None) -> DenseState:
        n = check_capacity(self.logical_length, cap)
        amps = np.zeros(n, dtype=np.complex128)
        for idx, amp in self.entries.items():
            amps[idx] = amp
        return DenseState._adopt(amps)

    def __repr__(self) -> str:
        return f"SparseState(N={format_bigint(self.logical_length)}, nnz={self.nnz})"


State = DenseState | SparseState


def normalize(state: State) -> State:
    """Divide every amplitude by the L2 norm of the state."""
    if isinstance(state, SparseState):
        norm = state.norm()
        if not state.entries or norm == 0.0:
            raise ZeroVector("cannot normalize an all-zero sparse state")
        return SparseState(
            state.logical_length, {i: v / norm for i, v in state.entries.items()}
        )
    return _normalize_array(np.array(state.amplitudes))


def _normalize_array(amps: np.ndarray) -> DenseState:
    """Normalize a freshly computed array in place and wrap it."""
    norm = math.sqrt(float(np.vdot(amps, amps).real))
    # the elementwise test is only needed when the norm is already tiny
    if norm <= PRUNE_TOL * math.sqrt(amps.size) and not np.any(np.abs(amps) > PRUNE_TOL):
        raise ZeroVector("cannot normalize an all-zero state")
    amps /= norm
    return DenseState._adopt(amps)


def _require_normalized(state: DenseState) -> None:
    total = float(np.vdot(state.amplitudes, state.amplitudes).real)
    if abs(total - 1.0) > NORM_TOL:
        raise NotNormalized(f"squared norm {total!r} deviates from 1 by more than {NORM_TOL}")


def sample_indices(state: DenseState, shots: int, seed: int) -> np.ndarray:
    """Draw ``shots`` basis indices with Born-rule probabilities.

    Inverse-CDF lookup into the cumulative |amplitude|^2 array.  Shot ``k``
    of ``sample_indices(s, m, seed)`` equals shot ``k`` of any longer run
    with the same seed.
    """
    _require_normalized(state)
    probs = state.probabilities()
    cdf = np.cumsum(probs)
    rng = np.random.default_rng(seed)
    u = rng.random(shots) * cdf[-1]
    idx = np.searchsorted(cdf, u, side="right")
    # u can round up to cdf[-1]; fall back to the last index with weight
    last = int(np.flatnonzero(probs)[-1])
    return np.minimum(idx, last)


def measure(state: DenseState, seed: int) -> tuple[DenseState, int]:
    """Projective measurement in the computational basis.

    Returns the collapsed one-hot state and the selected index.
    """
    index = int(sample_indices(state, 1, seed)[0])
    return DenseState.basis(index, len(state)), index


def format_state(state: State) -> str:
    if isinstance(state, SparseState):
        rows = ((i, state.entries[i]) for i in state.support())
        header = format_bigint(state.logical_length)
    else:
        amps = state.amplitudes
        rows = ((int(i), amps[i]) for i in np.flatnonzero(amps))
        header = str(len(state))
    lines = [f"STATE {header}"]
    for idx, amp in rows:
        lines.append(f"{format_bigint(idx)} {float(amp.real)!r} {float(amp.imag)!r}")
    return "\n".join(lines) + "\n"


def parse_state(text: str, sparse: bool = False, cap: int | None = None) -> State:
    lines = text.splitlines()
    body = [(no, ln.split()) for no, ln in enumerate(lines, start=1) if ln.strip()]
    if not body:
        raise ParseError("empty state file", 1)
    no, head = body[0]
    if len(head) != 2 or head[0] != "STATE":
        raise ParseError("expected header 'STATE <N>'", no)
    try:
        length = parse_bigint(head[1])
    except ValueError:
        raise ParseError(f"bad length {head[1]!r}", no) from None
    if length < 1:
        raise ParseError("length must be positive", no)
    rows = body[1:]
    if length < len(rows):
        raise LengthMismatch(f"header declares N={format_bigint(length)} but file has {len(rows)} rows")
    entries = {}
    prev = None
    for no, parts in rows:
        if len(parts) != 3:
            raise ParseError("expected '<index> <re> <im>'", no)
        try:
            idx = parse_bigint(parts[0])
            re, im = float(parts[1]), float(parts[2])
        except ValueError as exc:
            raise ParseError(str(exc), no) from None
        if not (math.isfinite(re) and math.isfinite(im)):
            raise ParseError("non-finite amplitude", no)
        if idx < 0:
            raise ParseError("negative index", no)
        if not idx < length:
            raise LengthMismatch(
                f"line {no}: index {parts[0]} outside declared length {format_bigint(length)}"
            )
        if prev is not None and not prev < idx:
            raise ParseError("indices must be strictly increasing", no)
        prev = idx
        entries[idx] = complex(re, im)
    if sparse:
        return SparseState(length, entries)
    n = check_capacity(length, cap)
    amps = np.zeros(n, dtype=np.complex128)
    for idx, amp in entries.items():
        amps[idx] = amp
    return DenseState._adopt(amps)


def store_state(state: State, path: str | os.PathLike) -> None:
    Path(path).write_text(format_state(state))


def load_state(path: str | os.PathLike, sparse: bool = False, cap: int | None = None) -> State:
    return parse_state(Path(path).read_text(), sparse=sparse, cap=cap)
