"""Emulated quantum addition, multiplication and exponentiation.

Each operation pairs every index ``i`` of the first operand with every index
``j`` of the second and accumulates ``a[i] * b[j]`` into the output entry
``i + j``, ``i * j`` or ``i ** j``; the result is then normalized.  The
accumulation is coherent (amplitudes add, not probabilities).

Output lengths are fixed by the operand lengths, not by the largest index
actually reached:

=============  =====================
add            ``2 * max(Na, Nb)``
multiply       ``Na * Nb``
exponentiate   ``Na ** Nb``
=============  =====================

Dense and sparse backends are selected by the operand type.  Exponentiation
uses the index convention ``0 ** 0 == 1``.
"""
from __future__ import annotations

from collections import defaultdict

import numpy as np

from .bigindex import Power, power_index
from .errors import SymbolicIndexError
from .state import DenseState, SparseState, State, _normalize_array, check_capacity, normalize


def _backend(a: State, b: State) -> str:
    if isinstance(a, DenseState) and isinstance(b, DenseState):
        return "dense"
    if isinstance(a, SparseState) and isinstance(b, SparseState):
        return "sparse"
    raise TypeError(
        f"operands must both be dense or both sparse, got {type(a).__name__} "
        f"and {type(b).__name__}"
    )


def _concrete(*values) -> None:
    for v in values:
        if isinstance(v, Power):
            raise SymbolicIndexError(
                f"index or length {v} is held symbolically; this operation needs plain integers"
            )


def add(a: State, b: State, *, cap: int | None = None) -> State:
    """Superposed sum: result[k] ~ sum over i + j == k of a[i] * b[j]."""
    if _backend(a, b) == "sparse":
        _concrete(a.logical_length, b.logical_length)
        acc = defaultdict(complex)
        for i, ai in a.entries.items():
            for j, bj in b.entries.items():
                acc[i + j] += ai * bj
        _concrete(*acc)
        length = 2 * max(a.logical_length, b.logical_length)
        return normalize(SparseState(length, acc))

    length = check_capacity(2 * max(len(a), len(b)), cap)
    out = np.zeros(length, dtype=np.complex128)
    conv = np.convolve(a.amplitudes, b.amplitudes)
    out[: conv.size] = conv
    return _normalize_array(out)


def multiply(a: State, b: State, *, cap: int | None = None) -> State:
    """Superposed product: result[k] ~ sum over i * j == k of a[i] * b[j]."""
    if _backend(a, b) == "sparse":
        _concrete(a.logical_length, b.logical_length)
        acc = defaultdict(complex)
        for i, ai in a.entries.items():
            for j, bj in b.entries.items():
                acc[i * j] += ai * bj
        _concrete(*acc)
        return normalize(SparseState(a.logical_length * b.logical_length, acc))

    na, nb = len(a), len(b)
    out = np.zeros(check_capacity(na * nb, cap), dtype=np.complex128)
    av, bv = a.amplitudes, b.amplitudes
    jj = np.arange(nb, dtype=np.int64)
    for i in np.flatnonzero(av):
        i = int(i)
        if i == 0:
            out[0] += av[0] * bv.sum()
        else:
            # i * j is injective in j for fixed i != 0, so no index repeats
            out[i * jj] += av[i] * bv
    return _normalize_array(out)


def exponentiate(a: State, b: State, *, cap: int | None = None) -> State:
    """Superposed power: result[k] ~ sum over i ** j == k of a[i] * b[j].

    The sparse backend keeps indices and the output length symbolic when they
    are too large to write out, so two 20-qubit operands are tractable there.
    The dense backend raises CapacityExceeded for anything beyond the cap,
    which already happens for two 4-qubit operands (16 ** 16 amplitudes).
    """
    if _backend(a, b) == "sparse":
        na, nb = a.logical_length, b.logical_length
        _concrete(nb)
        if na < 2:
            raise ValueError("exponentiation needs a base operand of length >= 2")
        acc = defaultdict(complex)
        for i, ai in a.entries.items():
            for j, bj in b.entries.items():
                acc[power_index(i, j)] += ai * bj
        return normalize(SparseState(power_index(na, nb), acc))

    na, nb = len(a), len(b)
    if na < 2:
        raise ValueError("exponentiation needs a base operand of length >= 2")
    out = np.zeros(check_capacity(power_index(na, nb), cap), dtype=np.complex128)
    av, bv = a.amplitudes, b.amplitudes
    ii = np.arange(na, dtype=np.int64)
    for j in np.flatnonzero(bv):
        j = int(j)
        if j == 0:
            out[1] += bv[0] * av.sum()
        else:
            # i ** j is injective in i for j >= 1; all values fit below the cap
            out[ii**j] += av * bv[j]
    return _normalize_array(out)
