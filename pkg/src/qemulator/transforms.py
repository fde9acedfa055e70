"""Quantum Fourier transform and its inverse, computed with an FFT.

Sign convention (easy to get backwards):

* ``qft`` uses the ``+2*pi*i*j*k/N`` exponent, i.e. it is the *inverse*
  classical DFT rescaled by ``sqrt(N)``.
* ``inv_qft`` uses ``-2*pi*i*j*k/N``, the forward classical DFT divided
  by ``sqrt(N)``.

``fft_kernel`` keeps signal-processing naming: ``"forward"`` is the
``-i`` transform without scaling, ``"inverse"`` is ``+i`` with ``1/N``.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import NotPowerOfTwo
from .state import DenseState, _normalize_array

FORWARD = "forward"
INVERSE = "inverse"


def _log2_exact(n: int) -> int:
    if n < 1 or n & (n - 1):
        raise NotPowerOfTwo(f"length {n} is not a power of two")
    return n.bit_length() - 1


@lru_cache(maxsize=64)
def _bit_reversal(n: int) -> np.ndarray:
    bits = _log2_exact(n)
    idx = np.arange(n, dtype=np.int64)
    rev = np.zeros(n, dtype=np.int64)
    for _ in range(bits):
        rev = (rev << 1) | (idx & 1)
        idx >>= 1
    rev.setflags(write=False)
    return rev


@lru_cache(maxsize=64)
def _twiddles(n: int) -> np.ndarray:
    """exp(-2*pi*i*k/n) for k < n/2; read-only, shared across calls."""
    k = np.arange(max(n // 2, 1))
    w = np.exp(-2j * np.pi * k / n)
    w.setflags(write=False)
    return w


def fft_kernel(x, direction: str = FORWARD) -> np.ndarray:
    """Iterative radix-2 decimation-in-time FFT.

    forward:  y[k] = sum_j x[j] exp(-2 pi i j k / N)
    inverse:  y[k] = (1/N) sum_j x[j] exp(+2 pi i j k / N)
    """
    if direction not in (FORWARD, INVERSE):
        raise ValueError(f"direction must be {FORWARD!r} or {INVERSE!r}")
    x = np.asarray(x, dtype=np.complex128)
    n = x.size
    _log2_exact(n)
    if direction == INVERSE:
        # conj(F conj(x)) / N gives the +i transform from the -i kernel
        x = np.conj(x)
    y = x[_bit_reversal(n)]
    w_full = _twiddles(n)
    half = 1
    while half < n:
        span = 2 * half
        w = w_full[:: n // span]
        blocks = y.reshape(n // span, span)
        top = blocks[:, :half].copy()
        bottom = blocks[:, half:] * w
        blocks[:, :half] = top + bottom
        blocks[:, half:] = top - bottom
        half = span
    if direction == INVERSE:
        y = np.conj(y)
        y /= n
    return y


def qft(state: DenseState) -> DenseState:
    """out[k] = normalize((1/sqrt(N)) * sum_j in[j] exp(+2 pi i j k / N))."""
    n = len(state)
    _log2_exact(n)
    y = fft_kernel(state.amplitudes, INVERSE)
    y *= np.sqrt(n)
    return _normalize_array(y)


def inv_qft(state: DenseState) -> DenseState:
    """out[k] = normalize((1/sqrt(N)) * sum_j in[j] exp(-2 pi i j k / N))."""
    n = len(state)
    _log2_exact(n)
    y = fft_kernel(state.amplitudes, FORWARD)
    y /= np.sqrt(n)
    return _normalize_array(y)
