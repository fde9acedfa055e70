"""Shor's factoring algorithm, emulated register by register.

Three arrays stand in for the quantum registers:

* ``phi``   first register, 2**m amplitudes, uniform to start with;
* ``sigma`` second register, 2**n entries counting how often each residue
  ``a**x mod X`` occurs;
* ``tau``   bookkeeping, ``tau[x] = a**x mod X``.  It records which first
  register indices are entangled with which residue.

Measuring ``sigma`` picks a residue; every ``phi[x]`` with ``tau[x]`` different
from it is zeroed.  The inverse QFT of what remains is measured, and the
continued-fraction expansion of ``r_hat / 2**m`` yields a period candidate.

``sigma`` holds raw counts and is L2-normalized before measurement, so a
residue is sampled with probability proportional to count**2 rather than
count.  Residues in the image of ``a**x mod X`` have near-equal counts, so
sampling is near-uniform either way.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ExhaustedTrials, InvalidConfig, ZeroSample
from .state import DenseState, _normalize_array, check_capacity, measure
from .transforms import inv_qft

_BLOCK = 1 << 16


class Status(enum.Enum):
    SUCCESS = "success"
    ODD_PERIOD = "odd-period"
    TRIVIAL_FACTOR = "trivial-factor"
    ZERO_SAMPLE = "zero-sample"


@dataclass(frozen=True)
class ShorConfig:
    X: int
    a: int
    m: int
    n: int
    seed: int = 0

    def __post_init__(self):
        X, a = self.X, self.a
        if X < 3:
            raise InvalidConfig(f"X must be at least 3, got {X}")
        if X % 2 == 0:
            raise InvalidConfig(f"X = {X} is even; 2 is a factor")
        if not 1 < a < X:
            raise InvalidConfig(f"a must satisfy 1 < a < X, got a = {a}")
        if math.gcd(a, X) != 1:
            raise InvalidConfig(f"gcd(a, X) = {math.gcd(a, X)}; a must be co-prime to X")
        if self.m < 1 or self.n < 1:
            raise InvalidConfig("register sizes m and n must be positive")
        if self.seed < 0:
            raise InvalidConfig("seed must be non-negative")


@dataclass(frozen=True)
class FactoringOutcome:
    status: Status
    r_tilde: int | None = None
    factors: tuple[int, int] | None = None
    raw_index: int | None = None
    residue: int | None = None

    @property
    def ok(self) -> bool:
        return self.status is Status.SUCCESS


def modpow(a: int, x: int, X: int) -> int:
    """a**x mod X by left-to-right square-and-multiply."""
    result = 1 % X
    base = a % X
    for bit in format(x, "b") if x else "":
        result = result * result % X
        if bit == "1":
            result = result * base % X
    return result


def residue_table(a: int, X: int, m: int) -> np.ndarray:
    """tau[x] = a**x mod X for every x < 2**m."""
    size = 1 << m
    dtype = np.min_scalar_type(X - 1)
    tau = np.empty(size, dtype=dtype)
    if X * X >= 1 << 63:
        for x in range(size):
            tau[x] = modpow(a, x, X)
        return tau
    block = min(size, _BLOCK)
    powers = np.empty(block, dtype=np.int64)
    y = 1 % X
    for k in range(block):
        powers[k] = y
        y = y * a % X
    step = modpow(a, block, X)
    start_val = 1 % X
    for start in range(0, size, block):
        tau[start : start + block] = (start_val * powers) % X
        start_val = start_val * step % X
    return tau


def second_register_counts(tau: np.ndarray, n: int) -> np.ndarray:
    """Occurrence count of each residue, over a register of 2**n entries."""
    top = int(tau.max())
    if top >= 1 << n:
        raise InvalidConfig(
            f"residue {top} does not fit a second register of n = {n} qubits"
        )
    return np.bincount(tau, minlength=1 << n)


def collapse_first_register(tau: np.ndarray, residue: int) -> DenseState:
    """Normalized first register after the second register read ``residue``."""
    phi = (tau == residue).astype(np.complex128)
    return _normalize_array(phi)


def convergents(numerator: int, denominator: int):
    """Yield the continued-fraction convergents p/q of numerator/denominator."""
    p_prev, p = 0, 1
    q_prev, q = 1, 0
    num, den = numerator, denominator
    while den:
        t, rem = divmod(num, den)
        p_prev, p = p, t * p + p_prev
        q_prev, q = q, t * q + q_prev
        yield p, q
        num, den = den, rem


def continued_fraction_reduce(numerator: int, denominator: int, X: int) -> int:
    """Denominator of the last convergent of numerator/denominator below X."""
    if numerator == 0:
        raise ZeroSample("measured 0; no period information, retry the trial")
    if not 0 < numerator < denominator:
        raise ValueError("need 0 <= numerator < denominator")
    best = 1
    for _, q in convergents(numerator, denominator):
        if q >= X:
            break
        best = q
    return best


def interpret_sample(a: int, X: int, m: int, r_hat: int, residue: int | None = None) -> FactoringOutcome:
    """Classical post-processing of one measured first-register value."""
    try:
        r_tilde = continued_fraction_reduce(r_hat, 1 << m, X)
    except ZeroSample:
        return FactoringOutcome(Status.ZERO_SAMPLE, raw_index=r_hat, residue=residue)
    if r_tilde % 2:
        return FactoringOutcome(Status.ODD_PERIOD, r_tilde, raw_index=r_hat, residue=residue)
    half = modpow(a, r_tilde // 2, X)
    for g in (math.gcd(half - 1, X), math.gcd(half + 1, X)):
        if 1 < g < X:
            factors = tuple(sorted((g, X // g)))
            return FactoringOutcome(Status.SUCCESS, r_tilde, factors, r_hat, residue)
    return FactoringOutcome(Status.TRIVIAL_FACTOR, r_tilde, raw_index=r_hat, residue=residue)


def _measurement_seeds(seed: int) -> tuple[int, int]:
    s = np.random.SeedSequence(seed).generate_state(2)
    return int(s[0]), int(s[1])


def shors_trial(cfg: ShorConfig, *, cap: int | None = None) -> FactoringOutcome:
    check_capacity(1 << cfg.m, cap)
    check_capacity(1 << cfg.n, cap)
    seed_second, seed_first = _measurement_seeds(cfg.seed)

    tau = residue_table(cfg.a, cfg.X, cfg.m)
    counts = second_register_counts(tau, cfg.n)
    sigma = _normalize_array(counts.astype(np.complex128))
    del counts
    _, residue = measure(sigma, seed_second)

    phi = collapse_first_register(tau, residue)
    del tau
    phi = inv_qft(phi)
    _, r_hat = measure(phi, seed_first)
    return interpret_sample(cfg.a, cfg.X, cfg.m, r_hat, residue)


def trial_seed(seed: int, trial: int) -> int:
    return int(np.random.SeedSequence([seed, trial]).generate_state(1)[0])


def shors(cfg: ShorConfig, max_trials: int = 10, *, cap: int | None = None) -> tuple[FactoringOutcome, int]:
    """Repeat independent trials until one succeeds; returns (outcome, trials used)."""
    if max_trials < 1:
        raise ValueError("max_trials must be positive")
    outcome = None
    for t in range(max_trials):
        trial_cfg = ShorConfig(cfg.X, cfg.a, cfg.m, cfg.n, trial_seed(cfg.seed, t))
        outcome = shors_trial(trial_cfg, cap=cap)
        if outcome.ok:
            return outcome, t + 1
    raise ExhaustedTrials(
        f"no factors of {cfg.X} after {max_trials} trials (last: {outcome.status.value})",
        last_outcome=outcome,
    )
