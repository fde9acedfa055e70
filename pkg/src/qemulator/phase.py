"""Emulated quantum phase estimation.

The eigenvalue ``z = exp(2 pi i theta)`` belonging to a supplied eigenvector
is read off directly, and the closest of the ``2**b`` roots of unity is
written out as a one-hot sparse state.  Runtime does not depend on ``b``.

Unitary text format::

    UNITARY <M>
    re,im re,im ... (M pairs)
    ... (M rows)
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import NotAnEigenvector, NotNormalized, NotPowerOfTwo, NotUnitary, ParseError
from .state import NORM_TOL, DenseState, SparseState

UNITARY_TOL = 1e-8
EIGEN_TOL = 1e-8
MAX_BITS = 62


@dataclass(frozen=True, eq=False)
class UnitaryMatrix:
    """Square unitary of dimension 2**m, checked on construction."""

    matrix: np.ndarray

    def __post_init__(self):
        u = np.array(self.matrix, dtype=np.complex128)
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise ValueError(f"unitary must be square, got shape {u.shape}")
        dim = u.shape[0]
        if dim < 1 or dim & (dim - 1):
            raise NotPowerOfTwo(f"unitary dimension {dim} is not a power of two")
        if not np.isfinite(u).all():
            raise ValueError("unitary entries must be finite")
        err = np.abs(u.conj().T @ u - np.eye(dim)).max()
        if err > UNITARY_TOL:
            raise NotUnitary(f"max |U^dagger U - I| = {err:.3e} exceeds {UNITARY_TOL}")
        u.setflags(write=False)
        object.__setattr__(self, "matrix", u)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def diagonal_phase(cls, angle: float) -> UnitaryMatrix:
        """diag(1, exp(i * angle)); (0, 1) is its eigenvector."""
        return cls(np.diag([1.0, np.exp(1j * angle)]))


@dataclass(frozen=True)
class PhaseEstimate:
    bits: int
    index: int
    theta: float


def eigenvalue_for_vector(u: UnitaryMatrix, phi: DenseState) -> complex:
    """Rayleigh quotient <phi|U|phi>, after checking phi really is an eigenvector."""
    if not isinstance(u, UnitaryMatrix):
        u = UnitaryMatrix(u)
    if len(phi) != u.dim:
        raise ValueError(f"eigenvector length {len(phi)} does not match unitary dimension {u.dim}")
    if not phi.is_normalized(NORM_TOL):
        raise NotNormalized("eigenvector must be normalized")
    v = phi.amplitudes
    uv = u.matrix @ v
    z = complex(np.vdot(v, uv))
    residual = float(np.abs(uv - z * v).max())
    if residual > EIGEN_TOL:
        raise NotAnEigenvector(f"residual |U phi - z phi|_inf = {residual:.3e} exceeds {EIGEN_TOL}")
    return z


def phase_of(z: complex) -> float:
    """theta in [0, 1) with z = |z| exp(2 pi i theta)."""
    theta = math.atan2(z.imag, z.real) / (2 * math.pi)
    if theta < 0:
        theta += 1.0
    # theta slightly below zero can round to exactly 1.0 after the shift
    return 0.0 if theta >= 1.0 else theta


def nearest_root_index(theta: float, bits: int) -> int:
    """round(theta * 2**bits) mod 2**bits, ties rounded away from zero."""
    x = theta * (1 << bits)  # exact: scaling by a power of two
    r = math.floor(x)
    if x - r >= 0.5:
        r += 1
    return r % (1 << bits)


def estimate_phase(u: UnitaryMatrix, phi: DenseState, bits: int) -> PhaseEstimate:
    if not 1 <= bits <= MAX_BITS:
        raise ValueError(f"precision bits must lie in [1, {MAX_BITS}], got {bits}")
    theta = phase_of(eigenvalue_for_vector(u, phi))
    return PhaseEstimate(bits, nearest_root_index(theta, bits), theta)


def qpe(u: UnitaryMatrix, phi: DenseState, bits: int) -> SparseState:
    """One-hot sparse state of length 2**bits at the nearest root of unity."""
    est = estimate_phase(u, phi, bits)
    return SparseState(1 << bits, {est.index: 1.0})


def format_unitary(u: UnitaryMatrix) -> str:
    lines = [f"UNITARY {u.dim}"]
    for row in u.matrix:
        lines.append(" ".join(f"{float(v.real)!r},{float(v.imag)!r}" for v in row))
    return "\n".join(lines) + "\n"


def parse_unitary(text: str) -> UnitaryMatrix:
    body = [(no, ln.split()) for no, ln in enumerate(text.splitlines(), start=1) if ln.strip()]
    if not body:
        raise ParseError("empty unitary file", 1)
    no, head = body[0]
    if len(head) != 2 or head[0] != "UNITARY":
        raise ParseError("expected header 'UNITARY <M>'", no)
    try:
        dim = int(head[1])
    except ValueError:
        raise ParseError(f"bad dimension {head[1]!r}", no) from None
    if dim < 1:
        raise ParseError("dimension must be positive", no)
    rows = body[1:]
    if len(rows) != dim:
        raise ParseError(f"expected {dim} rows, found {len(rows)}", rows[-1][0] if rows else no)
    m = np.empty((dim, dim), dtype=np.complex128)
    for r, (no, parts) in enumerate(rows):
        if len(parts) != dim:
            raise ParseError(f"expected {dim} 're,im' pairs, found {len(parts)}", no)
        for c, tok in enumerate(parts):
            re, sep, im = tok.partition(",")
            try:
                if not sep:
                    raise ValueError(f"expected 're,im', got {tok!r}")
                m[r, c] = complex(float(re), float(im))
            except ValueError as exc:
                raise ParseError(str(exc), no) from None
    return UnitaryMatrix(m)


def store_unitary(u: UnitaryMatrix, path: str | os.PathLike) -> None:
    Path(path).write_text(format_unitary(u))


def load_unitary(path: str | os.PathLike) -> UnitaryMatrix:
    return parse_unitary(Path(path).read_text())
