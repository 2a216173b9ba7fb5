"""Smooth-number counts and the Dickman density.

The Dickman function decays 29 orders of magnitude by u = 20, which rules
out every fixed-order march in double precision: quadrature truncation
injected near u = 1..3, where the function is O(1), rides a quasi-neutral
mode of the discretized delay recurrence and shows up as an absolute
~1e-16 floor under the true tail (rho(20) ~ 2.5e-29).  The table is built
instead from the piecewise power series of rho on each unit interval
[m, m+1], expanded about the midpoint: the delay equation
u*rho'(u) = -rho(u-1) turns the coefficient list of one interval into the
next by an exact recursion, with the series of 1 - log u seeding [1, 2].
Each interval crossing cancels about two decimal digits (the function
shrinks by up to ~70 per interval), so the recursion and the grid
evaluation run in 50-digit decimal arithmetic and the result is rounded
to float64 once, positive and strictly decreasing by construction.
Interpolation between table grid points is cubic with the stencil
confined to a single unit interval, because stencils spanning an integer
breakpoint would see the derivative kink at u = 1.
"""

from __future__ import annotations

from dataclasses import dataclass
import decimal
from math import floor, log

import numpy as np

from . import _accel
from .errors import InvalidArgumentError, RangeBudgetError
from .sieve import PrimeSieve

_PSI_X_BUDGET = 1_000_000_000


class DickmanTable:
    """Dickman rho sampled at k/inv_step for 0 <= k <= u_max*inv_step."""

    __slots__ = ("step", "inv_step", "u_max", "values")

    def __init__(self, step, inv_step, u_max, values):
        self.step = step
        self.inv_step = inv_step
        self.u_max = u_max
        self.values = values

    def __repr__(self):
        return f"DickmanTable(step=1/{self.inv_step}, u_max={self.u_max})"


_SERIES_TERMS = 96  # truncation compounds across intervals; 96 terms is converged at u=20


def _advance_series(b: list, m: int) -> list:
    """Series of rho about m + 1/2 from the series about m - 1/2.

    With rho(c + t) = sum a_j t^j on [m, m+1], c = m + 1/2, the delay
    equation (c + t) * rho'(c + t) = -rho(c - 1 + t) gives
    a_{j+1} = -(b_j + j*a_j) / (c*(j+1)) for j >= 0, and the constant
    term follows from continuity at u = m."""
    c = decimal.Decimal(2 * m + 1) / 2
    a = [decimal.Decimal(0)] * len(b)
    for j in range(len(b) - 1):
        a[j + 1] = -(b[j] + j * a[j]) / (c * (j + 1))
    half = decimal.Decimal(1) / 2
    at_left = _eval_series(a, -half)  # contribution of a_1.. at u = m
    a[0] = _eval_series(b, half) - at_left
    return a


def _eval_series(coeffs: list, t: "decimal.Decimal") -> "decimal.Decimal":
    out = decimal.Decimal(0)
    for cj in reversed(coeffs):
        out = out * t + cj
    return out


def build_dickman_table(step: float = 1.0 / 256, u_max: float = 20.0) -> DickmanTable:
    """Tabulate rho on a uniform grid from its piecewise power series."""
    inv = int(round(1.0 / step))
    if inv < 8 or abs(step * inv - 1.0) > 1e-12:
        raise InvalidArgumentError("step must be 1/k for an integer k >= 8")
    if u_max < 2 or u_max != int(u_max):
        raise InvalidArgumentError("u_max must be an integer >= 2")
    u_max = float(u_max)
    top = int(u_max)

    n = top * inv
    rho = np.empty(n + 1, dtype=np.float64)
    rho[: inv + 1] = 1.0
    with decimal.localcontext() as ctx:
        ctx.prec = 50
        one = decimal.Decimal(1)
        # seed series on [1, 2]: 1 - log(3/2 + t) about c = 3/2
        t23 = decimal.Decimal(2) / 3
        coeffs = [one - (3 * one / 2).ln()]
        pw = one
        for j in range(1, _SERIES_TERMS + 1):
            pw *= -t23
            coeffs.append(pw / j)
        for i in range(inv + 1, 2 * inv + 1):
            rho[i] = float(one - (decimal.Decimal(i) / inv).ln())
        for m in range(2, top):
            coeffs = _advance_series(coeffs, m)
            for i in range(1, inv + 1):
                t = decimal.Decimal(2 * i - inv) / (2 * inv)
                rho[m * inv + i] = float(_eval_series(coeffs, t))
    return DickmanTable(1.0 / inv, inv, u_max, rho)


_DEFAULT_TABLE: DickmanTable | None = None


def default_dickman_table() -> DickmanTable:
    global _DEFAULT_TABLE
    if _DEFAULT_TABLE is None:
        _DEFAULT_TABLE = build_dickman_table()
    return _DEFAULT_TABLE


def dickman_rho(u: float, table: DickmanTable | None = None) -> float:
    """Dickman rho(u); exactly 1.0 on [0, 1], interpolated from the table above."""
    if table is None:
        table = default_dickman_table()
    u = float(u)
    if u < 0 or u > table.u_max:
        raise InvalidArgumentError(f"u={u} outside [0, {table.u_max}]")
    if u <= 1.0:
        return 1.0
    inv = table.inv_step
    vals = table.values
    pos = u * inv
    k = int(floor(pos))
    if k >= vals.size - 1:
        return float(vals[-1])
    if pos == k:
        return float(vals[k])
    # cubic stencil clamped inside the unit interval [m, m+1] containing u
    m = int(floor(u))
    lo = m * inv
    hi = min((m + 1) * inv, vals.size - 1)
    j0 = min(max(k - 1, lo), hi - 3)
    xj = (np.arange(j0, j0 + 4, dtype=np.float64)) / inv
    yj = vals[j0 : j0 + 4]
    out = 0.0
    for i in range(4):
        term = yj[i]
        for t in range(4):
            if t != i:
                term *= (u - xj[t]) / (xj[i] - xj[t])
        out += term
    return float(out)


def psi_count(x, y, sieve: PrimeSieve) -> int:
    """Exact count of y-smooth integers n <= x (all prime factors <= y)."""
    if x < 1:
        raise InvalidArgumentError("psi_count needs x >= 1")
    if y < 2:
        raise InvalidArgumentError("psi_count needs y >= 2")
    xi = int(floor(x))
    yi = int(floor(y))
    if xi > _PSI_X_BUDGET:
        raise RangeBudgetError(f"psi_count budget is x <= {_PSI_X_BUDGET}")
    if yi >= xi:
        return xi
    if yi > sieve.limit:
        raise RangeBudgetError("psi_count needs y <= sieve.limit when y < x")
    if yi * yi > xi:
        # every non-smooth n <= x has exactly one prime factor above y
        total = 0
        if xi <= sieve.limit:
            i = int(np.searchsorted(sieve.primes, yi, side="right"))
            j = int(np.searchsorted(sieve.primes, xi, side="right"))
            ps = sieve.primes[i:j]
            total = int(np.sum(xi // ps)) if ps.size else 0
        else:
            from .sieve import segmented_primes

            lo = yi
            while lo < xi:
                hi_chunk = min(lo + (1 << 24), xi)
                ps = segmented_primes(lo, hi_chunk, sieve)
                if ps.size:
                    total += int(np.sum(xi // ps))
                lo = hi_chunk
        return xi - total
    cut = int(np.searchsorted(sieve.primes, yi, side="right"))
    primes_y = sieve.primes[:cut]
    pi_table = sieve.prime_count_cumulative[: yi + 1]
    return _accel.smooth_dfs_count(xi, yi, primes_y, pi_table)


@dataclass(frozen=True)
class PsiApproxReport:
    x: float
    y: float
    u: float
    exact: int
    approx: float
    residual: float


def psi_approx_report(x, y, sieve: PrimeSieve,
                      table: DickmanTable | None = None) -> PsiApproxReport:
    """Exact smooth count next to its Dickman approximation x*rho(log x/log y).

    The residual is (exact - approx) * log y / x, the natural normalization
    of the known second-order term.
    """
    if table is None:
        table = default_dickman_table()
    if y <= 1:
        raise InvalidArgumentError("psi_approx_report needs y > 1")
    u = log(x) / log(y)
    if u > table.u_max:
        raise InvalidArgumentError(f"log x/log y = {u:.3f} beyond table u_max")
    exact = psi_count(x, y, sieve)
    approx = float(x) * dickman_rho(u, table)
    residual = (exact - approx) * log(y) / float(x)
    return PsiApproxReport(float(x), float(y), u, exact, approx, residual)
