"""Integers of the form base**exp kept in factored form.

Sparse exponentiation produces indices such as ``i**j`` with i, j ~ 2**20,
whose binary expansion runs to tens of millions of bits.  Those are stored
as :class:`Power` objects instead.  Every value has exactly one
representation: values whose canonical form fits in ``MATERIALIZE_BITS``
bits are plain ``int``, larger ones are ``Power(base, exp)`` with ``base``
not itself a perfect power.  This makes dict lookups on mixed keys sound.
"""
from __future__ import annotations

import math
import sys
from functools import lru_cache, total_ordering

MATERIALIZE_BITS = 4096

_HASH_MODULUS = sys.hash_info.modulus


def iroot(n: int, k: int) -> int:
    """Floor of the k-th root of a non-negative integer."""
    if n < 0 or k < 1:
        raise ValueError("iroot needs n >= 0 and k >= 1")
    if n < 2 or k == 1:
        return n
    # Newton from an upper bound; monotone decreasing until it settles.
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


@lru_cache(maxsize=1 << 16)
def perfect_power(n: int) -> tuple[int, int]:
    """Return (p, e) with n == p**e, e maximal. Requires n >= 2."""
    if n < 2:
        raise ValueError("perfect_power needs n >= 2")
    for e in range(n.bit_length(), 1, -1):
        r = iroot(n, e)
        if r >= 2 and r**e == n:
            return r, e
    return n, 1


@total_ordering
class Power:
    """The integer ``base ** exp``, never materialized unless asked."""

    __slots__ = ("base", "exp")

    def __init__(self, base: int, exp: int):
        if base < 2 or exp < 1:
            raise ValueError("Power needs base >= 2 and exp >= 1")
        self.base = base
        self.exp = exp

    def log2(self) -> float:
        return self.exp * math.log2(self.base)

    def mod(self, m: int) -> int:
        return pow(self.base, self.exp, m)

    def __int__(self) -> int:
        return self.base**self.exp

    def __hash__(self) -> int:
        # Same value as hash(int(self)) without building the integer.
        return pow(self.base, self.exp, _HASH_MODULUS)

    def __eq__(self, other) -> bool:
        if isinstance(other, Power):
            if (self.base, self.exp) == (other.base, other.exp):
                return True
        elif not isinstance(other, int):
            return NotImplemented
        return _compare(self, other) == 0

    def __lt__(self, other) -> bool:
        if not isinstance(other, (int, Power)):
            return NotImplemented
        return _compare(self, other) < 0

    def __repr__(self) -> str:
        return f"Power({self.base}, {self.exp})"

    def __str__(self) -> str:
        return f"{self.base}^{self.exp}"


BigInt = int | Power


def _log2(x: BigInt) -> float:
    return x.log2() if isinstance(x, Power) else math.log2(x)


def _compare(a: BigInt, b: BigInt) -> int:
    if isinstance(a, int) and isinstance(b, int):
        return (a > b) - (a < b)
    # Power values are > 1, so non-positive ints sort below them
    if isinstance(a, int) and a <= 0:
        return -1
    if isinstance(b, int) and b <= 0:
        return 1
    la, lb = _log2(a), _log2(b)
    margin = 1e-12 * max(abs(la), abs(lb)) + 1e-9
    if la - lb > margin:
        return 1
    if lb - la > margin:
        return -1
    ia, ib = int(a), int(b)
    return (ia > ib) - (ia < ib)


def _canonical(p: int, e: int) -> BigInt:
    if p.bit_length() * e <= MATERIALIZE_BITS:
        return p**e
    return Power(p, e)


def power_index(i: BigInt, j: int) -> BigInt:
    """``i ** j`` in canonical form, with the convention ``0 ** 0 == 1``."""
    if j < 0:
        raise ValueError("negative exponent")
    if j == 0:
        return 1
    if isinstance(i, Power):
        return _canonical(i.base, i.exp * j)
    if i < 0:
        raise ValueError("negative base")
    if i < 2:
        return i
    p, e = perfect_power(i)
    return _canonical(p, e * j)


def parse_bigint(token: str) -> BigInt:
    """Parse ``123`` or ``base^exp``."""
    if "^" in token:
        base, _, exp = token.partition("^")
        return power_index(int(base), int(exp))
    return int(token)


def format_bigint(x: BigInt) -> str:
    if isinstance(x, int) and x.bit_length() > MATERIALIZE_BITS:
        p, e = perfect_power(x)
        if e > 1:
            return f"{p}^{e}"
    return str(x)
