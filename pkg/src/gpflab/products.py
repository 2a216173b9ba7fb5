"""Ledger of log-mass over pairwise products: splits the total logarithmic
mass of {a*b + 1} into small-prime and large-prime contributions via residue
counting, checks the quadratic residue-concentration inequality, and reports
the exponent implied by the large-prime mass.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import fsum, log

import numpy as np

from .errors import InvalidArgumentError
from .shifted import IndexSet
from .sieve import PrimeSieve


def _members_checked(U: IndexSet, N: int, name: str) -> np.ndarray:
    arr = U.members()
    if arr.size and arr[-1] > N:
        raise InvalidArgumentError(f"{name} has elements above N={N}")
    return arr


def r_count(U: IndexSet, h: int, m: int) -> int:
    """Number of elements of U congruent to h mod m."""
    if m < 1:
        raise InvalidArgumentError("r_count needs m >= 1")
    return int(np.count_nonzero(U.members() % m == h % m))


def log_E(A: IndexSet, B: IndexSet) -> float:
    """log of the product of (a*b + 1) over all pairs."""
    if len(A) == 0 or len(B) == 0:
        raise InvalidArgumentError("log_E needs nonempty sets")
    bs = B.members().astype(np.float64)
    rows = [fsum(np.log(a * bs + 1.0).tolist()) for a in A.members().tolist()]
    return fsum(rows)


@dataclass(frozen=True)
class LogSplitResult:
    """Small-prime log-mass, split at prime powers <= N versus above."""

    total: float
    sigma1: float
    sigma2: float


def _prime_power_moduli(N: int, cap: int, sieve: PrimeSieve):
    """(p, m) with p prime <= N and m = p^k <= cap."""
    if sieve.limit < N:
        raise InvalidArgumentError("sieve limit below N")
    idx = int(np.searchsorted(sieve.primes, N, side="right"))
    out = []
    for p in sieve.primes[:idx].tolist():
        m = p
        while m <= cap:
            out.append((p, m))
            m *= p
    out.sort(key=lambda t: t[1])
    return out


def log_E1(A: IndexSet, B: IndexSet, N: int, sieve: PrimeSieve) -> LogSplitResult:
    """Log-mass of the pair products carried by primes p <= N.

    For each prime power m = p^k (up to N^2 + 1, past which no product
    reaches), pairs with m | ab+1 are counted through residue classes:
    b must fall in the class -a^{-1} mod m.  sigma1 collects moduli <= N,
    sigma2 the rest.
    """
    if N < 1:
        raise InvalidArgumentError("log_E1 needs N >= 1")
    arr_a = _members_checked(A, N, "A")
    arr_b = _members_checked(B, N, "B")
    if arr_a.size == 0 or arr_b.size == 0:
        raise InvalidArgumentError("log_E1 needs nonempty sets")
    parts_small = []
    parts_large = []
    for p, m in _prime_power_moduli(N, N * N + 1, sieve):
        cnt_a = np.bincount(arr_a % m, minlength=m)
        cnt_b = np.bincount(arr_b % m, minlength=m)
        pairs = 0
        for h in np.flatnonzero(cnt_a).tolist():
            if h % p == 0:
                continue  # a not invertible mod p^k: ab = -1 impossible
            target = (-pow(h, -1, m)) % m
            if target < cnt_b.size:
                pairs += int(cnt_a[h]) * int(cnt_b[target])
        if pairs:
            (parts_small if m <= N else parts_large).append(pairs * log(p))
    s1 = fsum(parts_small)
    s2 = fsum(parts_large)
    return LogSplitResult(s1 + s2, s1, s2)


def log_E2(A: IndexSet, B: IndexSet, N: int, sieve: PrimeSieve) -> float:
    """Log-mass of the pair products carried by primes above N."""
    return log_E(A, B) - log_E1(A, B, N, sieve).total


@dataclass(frozen=True)
class SquareErrorsResult:
    lhs: float
    rhs: float
    holds: bool


def square_errors_check(U: IndexSet, N: int, sieve: PrimeSieve) -> SquareErrorsResult:
    """Residue concentration inequality for a set U inside [1, N]:

        sum_{p^k <= N} log p * sum_h r(U, h, p^k)^2
            <= |U| (|U| - 1 + pi(N)) log N.
    """
    if N < 1:
        raise InvalidArgumentError("square_errors_check needs N >= 1")
    arr = _members_checked(U, N, "U")
    parts = []
    if arr.size:
        for p, m in _prime_power_moduli(N, N, sieve):
            cnt = np.bincount(arr % m, minlength=m).astype(np.int64)
            parts.append(float(np.sum(cnt * cnt)) * log(p))
    lhs = fsum(parts)
    pi_n = int(np.searchsorted(sieve.primes, N, side="right"))
    card = len(U)
    rhs = card * (card - 1 + pi_n) * log(N) if N > 1 else 0.0
    return SquareErrorsResult(lhs, rhs, lhs <= rhs * (1.0 + 1e-12) + 1e-12)


@dataclass(frozen=True)
class LedgerReport:
    """Full log-mass accounting for a pair of sets inside [1, N]."""

    N: int
    A_card: int
    B_card: int
    log_E: float
    log_E1: float
    log_E2: float
    sigma1: float
    sigma2: float
    lemma72_lhs: float
    lemma72_rhs: float
    implied_exponent: float


def ledger_report(A: IndexSet, B: IndexSet, N: int, sieve: PrimeSieve) -> LedgerReport:
    """Assemble the complete ledger: total mass, small/large split, the
    tighter of the two residue-concentration checks, and the exponent that
    the large-prime mass forces on the greatest prime factor."""
    if N < 2:
        raise InvalidArgumentError("ledger_report needs N >= 2")
    total = log_E(A, B)
    split = log_E1(A, B, N, sieve)
    e2 = total - split.total
    sq_a = square_errors_check(A, N, sieve)
    sq_b = square_errors_check(B, N, sieve)
    tight = sq_a if (sq_a.rhs - sq_a.lhs) <= (sq_b.rhs - sq_b.lhs) else sq_b
    implied = 1.0 + e2 / (len(B) * N * log(N))
    return LedgerReport(N, len(A), len(B), total, split.total, e2,
                        split.sigma1, split.sigma2, tight.lhs, tight.rhs, implied)
