"""Prime counts in arithmetic progressions and discrepancy aggregates.

All aggregates return a DiscrepancyReport whose per_q entries are exact
per-modulus quantities and whose total is a compensated reduction of the
per_q column in ascending modulus order, so results do not depend on the
thread count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import exp, floor, fsum, gcd, isqrt, log

import numpy as np

from . import _accel
from .errors import InvalidArgumentError, RangeBudgetError
from .sieve import PrimeSieve, euler_phi, factorize, segmented_primes


def _xi_in_sieve(x, sieve, what) -> int:
    if x < 0:
        raise InvalidArgumentError(f"{what} needs x >= 0")
    xi = int(floor(x))
    if xi > sieve.limit:
        raise RangeBudgetError(f"{what} needs x <= sieve.limit ({sieve.limit})")
    return xi


def pi_of(x, sieve: PrimeSieve) -> int:
    """Number of primes <= x."""
    xi = _xi_in_sieve(x, sieve, "pi_of")
    return int(sieve.prime_count_cumulative[xi])


def theta_of(x, sieve: PrimeSieve) -> float:
    """Chebyshev theta: sum of log p over primes p <= x."""
    xi = _xi_in_sieve(x, sieve, "theta_of")
    idx = int(np.searchsorted(sieve.primes, xi, side="right"))
    if idx == 0:
        return 0.0
    return float(sieve.theta_cumulative()[idx - 1])


def psi_cheb(x, sieve: PrimeSieve) -> float:
    """Chebyshev psi: sum of Lambda(n) over n <= x."""
    xi = _xi_in_sieve(x, sieve, "psi_cheb")
    terms = []
    for p in sieve.primes[: int(np.searchsorted(sieve.primes, isqrt(xi), side="right"))].tolist():
        lp = log(p)
        pk = p * p
        while pk <= xi:
            terms.append(lp)
            pk *= p
    return theta_of(xi, sieve) + fsum(terms)


def _primes_upto(x: int, sieve: PrimeSieve) -> np.ndarray:
    idx = int(np.searchsorted(sieve.primes, x, side="right"))
    return sieve.primes[:idx]


def _prime_powers(x: int, sieve: PrimeSieve) -> tuple[np.ndarray, np.ndarray]:
    """Prime powers n <= x with weights log p, sorted by n."""
    ps = _primes_upto(x, sieve)
    ns = [ps]
    ws = [np.log(ps.astype(np.float64))]
    for p in ps[: int(np.searchsorted(ps, isqrt(x), side="right"))].tolist():
        lp = log(p)
        pk = p * p
        while pk <= x:
            ns.append(np.array([pk], dtype=np.int64))
            ws.append(np.array([lp]))
            pk *= p
    n_all = np.concatenate(ns)
    w_all = np.concatenate(ws)
    order = np.argsort(n_all, kind="stable")
    return n_all[order], w_all[order]


def pi_ap(x, q: int, a: int, sieve: PrimeSieve) -> int:
    """Number of primes p <= x with p = a (mod q)."""
    if q < 1:
        raise InvalidArgumentError("pi_ap needs q >= 1")
    xi = _xi_in_sieve(x, sieve, "pi_ap")
    ps = _primes_upto(xi, sieve)
    return int(np.count_nonzero(ps % q == a % q))


def psi_ap(x, q: int, a: int, sieve: PrimeSieve) -> float:
    """Sum of Lambda(n) over n <= x with n = a (mod q)."""
    if q < 1:
        raise InvalidArgumentError("psi_ap needs q >= 1")
    xi = _xi_in_sieve(x, sieve, "psi_ap")
    ns, ws = _prime_powers(xi, sieve)
    mask = ns % q == a % q
    return fsum(ws[mask].tolist())


def error_term(x, q: int, a: int, sieve: PrimeSieve) -> float:
    """pi(x; q, a) - pi(x)/phi(q) for gcd(a, q) == 1."""
    if q < 1:
        raise InvalidArgumentError("error_term needs q >= 1")
    if gcd(a, q) != 1:
        raise InvalidArgumentError(f"error_term needs gcd(a, q) == 1, got a={a}, q={q}")
    return pi_ap(x, q, a, sieve) - pi_of(x, sieve) / euler_phi(q, sieve)


@dataclass(frozen=True)
class DiscrepancyReport:
    """Per-modulus discrepancies plus their aggregate.

    total aggregates per_q according to the mode (sum of values, or sum of
    absolute values for the dyadic/windowed modes); normalized is total/x.
    """

    x: float
    mode: str
    q_range: str
    a: int | None
    per_q: list[tuple[int, float]]
    total: float
    normalized: float


def _ordered_map(fn, items, threads):
    if threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


def bv_sum(x, Q: int, sieve: PrimeSieve, threads: int = 1) -> DiscrepancyReport:
    """Sum over q <= Q of the maximal progression discrepancy

        max_{y <= x} max_{a: gcd(a,q)=1} |pi(y; q, a) - pi(y)/phi(q)|.
    """
    if Q < 1:
        raise InvalidArgumentError("bv_sum needs Q >= 1")
    if x < 1:
        raise InvalidArgumentError("bv_sum needs x >= 1")
    xi = _xi_in_sieve(x, sieve, "bv_sum")
    ps = _primes_upto(xi, sieve)

    def one(q: int) -> float:
        if q == 1:
            return 0.0
        res = (ps % q).astype(np.int64)
        coprime = np.gcd(np.arange(q, dtype=np.int64), q) == 1
        phi = int(np.count_nonzero(coprime))
        return _accel.bv_max_scan(res, coprime, phi)

    qs = list(range(1, Q + 1))
    devs = _ordered_map(one, qs, threads)
    per_q = list(zip(qs, devs))
    total = fsum(devs)
    return DiscrepancyReport(float(x), "bv_max", f"q <= {Q}", None, per_q,
                             total, total / float(x))


def signed_sum(x, Q: int, a: int, sieve: PrimeSieve, threads: int = 1) -> DiscrepancyReport:
    """Signed sum over q <= Q, gcd(q, a) == 1, of pi(x;q,a) - pi(x)/phi(q)."""
    if Q < 1:
        raise InvalidArgumentError("signed_sum needs Q >= 1")
    if x < 1:
        raise InvalidArgumentError("signed_sum needs x >= 1")
    xi = _xi_in_sieve(x, sieve, "signed_sum")
    ps = _primes_upto(xi, sieve)
    pix = int(ps.size)
    qs = [q for q in range(1, Q + 1) if gcd(q, a) == 1]

    def one(q: int) -> float:
        if q == 1:
            return 0.0
        cnt = int(np.count_nonzero(ps % q == a % q))
        return cnt - pix / euler_phi(q, sieve)

    errs = _ordered_map(one, qs, threads)
    per_q = list(zip(qs, errs))
    total = fsum(errs)
    return DiscrepancyReport(float(x), "signed", f"q <= {Q} coprime to {a}", a,
                             per_q, total, total / float(x))


def dyadic_abs_sum(x, Q: int, a: int, sieve: PrimeSieve, use_psi: bool = False,
                   threads: int = 1) -> DiscrepancyReport:
    """Sum over Q <= q < 2Q, gcd(q, a) == 1, of the absolute progression error
    at y = x, in the prime-counting or Chebyshev-psi normalization."""
    if Q < 1:
        raise InvalidArgumentError("dyadic_abs_sum needs Q >= 1")
    if x < 1:
        raise InvalidArgumentError("dyadic_abs_sum needs x >= 1")
    xi = _xi_in_sieve(x, sieve, "dyadic_abs_sum")
    qs = [q for q in range(Q, 2 * Q) if gcd(q, a) == 1]
    if use_psi:
        ns, ws = _prime_powers(xi, sieve)
        full = psi_cheb(xi, sieve)

        def one(q: int) -> float:
            if q == 1:
                return 0.0
            s = fsum(ws[ns % q == a % q].tolist())
            return s - full / euler_phi(q, sieve)
    else:
        ps = _primes_upto(xi, sieve)
        pix = int(ps.size)

        def one(q: int) -> float:
            if q == 1:
                return 0.0
            cnt = int(np.count_nonzero(ps % q == a % q))
            return cnt - pix / euler_phi(q, sieve)

    errs = _ordered_map(one, qs, threads)
    per_q = list(zip(qs, errs))
    total = fsum(abs(e) for e in errs)
    return DiscrepancyReport(float(x), "dyadic_abs", f"{Q} <= q < {2 * Q}", a,
                             per_q, total, total / float(x))


def theorem4_sum(x, Q: int, P1, P2, a: int, sieve: PrimeSieve,
                 threads: int = 1) -> DiscrepancyReport:
    """Windowed products p*m <= x with P1 < p <= P2: per modulus q ~ Q,
    the absolute difference between the log-weight mass on the progression
    a (mod q) and its coprime average, summed over q.

    The progression side scatters each product's weight onto the divisors
    of |p*m - a| inside [Q, 2Q); the average side sums theta-window masses
    over m coprime to q.  Requires the product range (and |a|) to stay
    within the sieve limit so shifted values factorize by table lookup.
    """
    if Q < 1:
        raise InvalidArgumentError("theorem4_sum needs Q >= 1")
    if a == 0:
        raise InvalidArgumentError("theorem4_sum needs a != 0")
    if P1 < 1 or P2 < P1:
        raise InvalidArgumentError("theorem4_sum needs 1 <= P1 <= P2")
    xi = _xi_in_sieve(x, sieve, "theorem4_sum")
    if xi < 2:
        raise InvalidArgumentError("theorem4_sum needs x >= 2")
    vmax = max(abs(2 - a), abs(xi - a))
    if vmax > sieve.limit:
        raise RangeBudgetError("theorem4_sum needs |p*m - a| <= sieve.limit; "
                               "shrink x or |a| or enlarge the sieve")
    p2c = min(float(P2), float(xi))
    # primes strictly above P1: the first prime > floor(P1) already exceeds P1
    i = int(np.searchsorted(sieve.primes, floor(P1), side="right"))
    j = int(np.searchsorted(sieve.primes, floor(p2c), side="right"))
    window = sieve.primes[i:j]

    wlog = np.zeros(xi + 1, dtype=np.float64)
    for p in window.tolist():
        wlog[p::p] += log(p)

    acc = _accel.divisor_scatter(wlog, sieve.spf, a, Q, 2 * Q)
    exact_hit = float(wlog[a]) if 2 <= a <= xi else 0.0

    m_max = xi // (int(floor(P1)) + 1) if window.size else 0
    if window.size:
        m_arr = np.arange(1, m_max + 1, dtype=np.int64)
        caps = np.minimum(xi // m_arr, np.int64(floor(p2c)))
        idxs = np.searchsorted(sieve.primes, caps, side="right")
        theta_cum = sieve.theta_cumulative()
        theta_p1 = float(theta_cum[i - 1]) if i > 0 else 0.0
        # theta(cap_m) - theta(P1), zero when no window prime fits under the cap
        tvals = np.where(idxs > i, theta_cum[np.maximum(idxs - 1, 0)] - theta_p1, 0.0)

    qs = [q for q in range(Q, 2 * Q) if gcd(q, a) == 1]

    def one(q: int) -> float:
        a_side = float(acc[q - Q]) + exact_hit
        if not window.size:
            return a_side
        coprime_m = np.gcd(m_arr, q) == 1
        base = fsum(tvals[coprime_m].tolist())
        corr = 0.0
        for pq, _ in factorize(q, sieve).factors:
            if P1 < pq <= p2c:
                hi_m = xi // pq
                corr += log(pq) * int(np.count_nonzero(coprime_m[:hi_m]))
        w_q = base - corr
        return a_side - w_q / euler_phi(q, sieve)

    errs = _ordered_map(one, qs, threads)
    per_q = list(zip(qs, errs))
    total = fsum(abs(e) for e in errs)
    return DiscrepancyReport(float(x), "theorem4", f"{Q} <= q < {2 * Q}", a,
                             per_q, total, total / float(x))


def default_rough_z(x) -> float:
    """exp(log x / (log log x)^2), the canonical roughness threshold."""
    if x <= 2.8:
        raise InvalidArgumentError("roughness threshold needs x > e")
    ll = log(log(x))
    if ll <= 0:
        raise InvalidArgumentError("roughness threshold needs log log x > 0")
    return exp(log(x) / (ll * ll))


def lambda_extension_sum(x, Q: int, P1, P2, a: int, z, sieve: PrimeSieve,
                         threads: int = 1) -> DiscrepancyReport:
    """Von Mangoldt mass on prime powers n in (P1, P2] with all prime factors
    >= z, paired with the dyadic block t in (x/(2n), x/n]: per modulus q ~ Q,
    |sum over n*t = a (mod q) - (1/phi(q)) * sum over gcd(n*t, q) = 1|,
    summed over q coprime to a."""
    if Q < 1:
        raise InvalidArgumentError("lambda_extension_sum needs Q >= 1")
    if a == 0:
        raise InvalidArgumentError("lambda_extension_sum needs a != 0")
    if P1 < 1 or P2 < P1:
        raise InvalidArgumentError("lambda_extension_sum needs 1 <= P1 <= P2")
    if x < 2:
        raise InvalidArgumentError("lambda_extension_sum needs x >= 2")
    xi = int(floor(x))
    if z is None:
        z = default_rough_z(x)
    p2c = min(float(P2), float(xi))

    stars: list[tuple[int, float]] = []
    if p2c > P1:
        for p in segmented_primes(floor(P1), floor(p2c), sieve).tolist():
            if p > P1 and p >= z:
                stars.append((p, log(p)))
        root = isqrt(int(floor(p2c)))
        for p in _primes_upto(root, sieve).tolist():
            if p < z:
                continue
            lp = log(p)
            pk = p * p
            while pk <= p2c:
                if pk > P1:
                    stars.append((pk, lp))
                pk *= p
        stars.sort()

    qs = [q for q in range(Q, 2 * Q) if gcd(q, a) == 1]

    def one(q: int) -> float:
        if q == 1:
            return 0.0
        fact_q = factorize(q, sieve).factors
        sq_divs = [(1, 1)]  # squarefree divisors of q with their moebius signs
        for p, _ in fact_q:
            sq_divs.extend([(d * p, -mu) for d, mu in sq_divs])
        phi = euler_phi(q, sieve)
        s1_terms = []
        s2_terms = []
        for n, w in stars:
            if gcd(n, q) != 1:
                continue
            lo = xi // (2 * n)
            hi = xi // n
            if hi <= lo:
                continue
            c = (a * pow(n, -1, q)) % q
            cnt1 = (hi - c) // q - (lo - c) // q
            cnt2 = 0
            for d, mu in sq_divs:
                cnt2 += mu * (hi // d - lo // d)
            if cnt1:
                s1_terms.append(w * cnt1)
            if cnt2:
                s2_terms.append(w * cnt2)
        return fsum(s1_terms) - fsum(s2_terms) / phi

    errs = _ordered_map(one, qs, threads)
    per_q = list(zip(qs, errs))
    total = fsum(abs(e) for e in errs)
    return DiscrepancyReport(float(x), "lambda_ext", f"{Q} <= q < {2 * Q}", a,
                             per_q, total, total / float(x))


def trivial_bound_ratio(report: DiscrepancyReport) -> float:
    """report.total divided by the trivial bound shape x * log(2x)."""
    return report.total / (report.x * log(2.0 * report.x))
