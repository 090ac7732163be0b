"""Surface enumeration, counting asymptotics, and Euler-product constants.

The enumeration scans c downward per residue m, pricing each candidate with
vectorized Euler factors, and stops behind a certified monotone envelope:
the fluctuating factor prod_{p|D}(1 + chi(p)/p) is bounded below by the
Mertens-style product over the first floor(log2 D) primes, which rises
dyadically.  All threshold decisions are exact: floats do the bulk pricing,
and anything within a guard band of the threshold is re-decided with
rationals and interval pi.

Constants are truncated Euler products over a shared segmented prime
stream, with explicit tail certificates (Rosser's p_n > n log n).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from .classgroup import is_admissible
from .hermitian import SurfaceIndex, divisors_below_sqrt
from .ntkernel import PRIMES, character, divisor_stats, factorize, prime_blocks
from .volume import ExactArea, area_closed_form, compare_to_threshold

DEFAULT_PRIME_LIMIT = 300_000_000

# rational lower bound on pi, used only inside certified stop rules
_PI_LO = Fraction(314159265358979, 10**14)


def _require_admissible(d: int) -> None:
    res = is_admissible(d)
    if not res.admissible or res.reason == "d4-constant-only":
        raise ValueError(f"d = {d} is not admissible: {res.reason or 'constant-only'}")


# --- the arithmetic weight F and its counting lemma ----------------------


def F_value(d: int, n: int) -> Fraction:
    """F(n) = n * prod_{p|n} (1 + chi(p)/p), exactly."""
    chi = character(d)
    out = Fraction(n)
    for p, _ in factorize(n).factors:
        out *= 1 + Fraction(chi.at_prime(p), p)
    return out


def _mertens_fractions(count: int = 64) -> list[Fraction]:
    """B_k = prod over the first k primes of (1 - 1/p), exact; B_0 = 1."""
    out = [Fraction(1)]
    for p in PRIMES[:count]:
        out.append(out[-1] * (1 - Fraction(1, p)))
    return out


_MERTENS = _mertens_fractions()


def _dyadic_envelope_start(threshold: Fraction) -> int:
    """Smallest power of two N with N * B_{log2 N} >= threshold, so that
    every n >= N has n * prod_{p|n}(1 - 1/p) >= threshold.

    Works because 2^k B_k is nondecreasing in k: the step ratio is
    2(1 - 1/p_{k+1}) >= 4/3 from k = 1 on.
    """
    if threshold <= 1:
        return 1
    for k in range(len(_MERTENS) - 1):
        if (1 << k) * _MERTENS[k] >= threshold:
            return 1 << k
    raise ValueError(f"threshold {threshold} out of supported range")


_RATIO_CACHE: dict[int, np.ndarray] = {}


def weight_ratio_array(d: int, cap: int) -> np.ndarray:
    """R[n] = prod_{p | n, p not | d} (1 + chi(p)/p) for n < cap, float64.

    Built by one multiplicative pass over primes; cached per d and grown
    monotonically.
    """
    cached = _RATIO_CACHE.get(d)
    if cached is not None and len(cached) >= cap:
        return cached
    chi = character(d)
    table = chi.residue_table()
    R = np.ones(cap, dtype=np.float64)
    for block in prime_blocks(cap):
        for p in block.tolist():
            ch = int(table[p % d])
            if ch == 0:
                continue
            R[p::p] *= 1.0 + ch / p
    _RATIO_CACHE[d] = R
    return R


def count_F_in_progression(d: int, a: int, r: int, X) -> int:
    """Exact #{n = r (mod a), n >= 1 : F(n) < X}.

    Requires every prime of a to divide d.  Enumeration is certified
    complete by the dyadic Mertens envelope; near-threshold candidates are
    re-decided with exact rationals.
    """
    if a < 1:
        raise ValueError(f"modulus must be positive, got {a}")
    for p, _ in factorize(a).factors if a > 1 else ():
        if d % p:
            raise ValueError(f"prime {p} of modulus a = {a} does not divide d = {d}")
    X = Fraction(X)
    if X <= 1:
        return 0
    ncap = _dyadic_envelope_start(X)
    R = weight_ratio_array(d, max(ncap, 2))
    start = r % a if (r % a) else a
    ns = np.arange(start, ncap, a, dtype=np.int64)
    if len(ns) == 0:
        return 0
    F = ns.astype(np.float64) * R[ns]
    Xf = float(X)
    guard = 1e-9 * Xf + 1e-12
    count = int(np.count_nonzero(F < Xf - guard))
    for n in ns[np.abs(F - Xf) <= guard].tolist():
        if F_value(d, int(n)) < X:
            count += 1
    return count


# --- census enumeration --------------------------------------------------


@dataclass(frozen=True)
class SurfaceRecord:
    m: int
    c: int
    r: int
    d0: int
    D: int
    q: Fraction

    def area(self) -> ExactArea:
        return ExactArea(self.q)


def _uniform_bound_coeff(d: int, d0: int) -> Fraction:
    """Coefficient K with area >= K * D * B(D) * pi for every surface with
    this (d, d0): worst-case symbol in every d-side Euler factor."""
    k = Fraction(d, d0 * d0) / 3
    dps = [p for p, _ in factorize(d).factors]
    k /= 2 ** len(dps)
    for p in dps:
        k *= 1 - Fraction(1, p)
    return k


def _dyadic_D_cap(coeff: Fraction, threshold: Fraction) -> int:
    """Smallest power of two M with coeff * pi * M * B_{log2 M} > threshold:
    no surface with D >= M fits under the threshold."""
    base = coeff * _PI_LO
    for k in range(len(_MERTENS) - 1):
        if base * (1 << k) * _MERTENS[k] > threshold:
            return 1 << k
    raise ValueError(f"threshold {threshold} out of supported range")


def _exact_q(d: int, m: int, c: int) -> Fraction:
    return area_closed_form(SurfaceIndex(d, m, c, 1)).q


_CHUNK = 1 << 17


def _scan_m(d: int, m: int, X: Fraction, bound_factor: int, mode: str):
    """One residue class m, c descending under the certified envelope cut at
    bound_factor times the threshold.

    mode "count": exact number of c with area < X.
    mode "pairs": those (m, c) pairs, exactly decided.
    mode "areas": float areas plus c values for every scanned candidate,
    threshold decisions deferred to the caller.
    """
    g = gcd(m, d)
    d0 = d // g
    side_primes = [p for p, _ in factorize(d // d0).factors]
    cap = _dyadic_D_cap(_uniform_bound_coeff(d, d0), X * bound_factor)
    R = weight_ratio_array(d, max(cap, 2))
    base_q = float(Fraction(d, d0 * d0) / 3)
    # per-prime lookup tables indexed by D mod p, folding in the halving at
    # shared primes (where the D-symbol is 0)
    tabs = []
    for p in side_primes:
        tab = np.empty(p, dtype=np.float64)
        for rem in range(p):
            sym = 0 if rem == 0 else (1 if pow(rem, (p - 1) // 2, p) == 1 else -1)
            fac = (1 - p**-2) / (1 - sym / p)
            if rem == 0:
                fac *= 0.5
            tab[rem] = fac
        tabs.append((p, tab))

    c_start = (m * m - 1) // d
    n0 = m * m - c_start * d  # in [1, d]
    step = d * d // (g * g)
    D0 = d * n0 // (g * g)
    total = int(math.ceil((cap - D0) / step)) if cap > D0 else 0
    Xf = float(X)
    guard = 1e-9 * Xf + 1e-12
    count = 0
    pairs: list[tuple[int, int]] = []
    area_chunks: list[np.ndarray] = []
    for lo in range(0, total, _CHUNK):
        hi = min(lo + _CHUNK, total)
        j = np.arange(lo, hi, dtype=np.int64)
        D = D0 + step * j
        qv = base_q * D.astype(np.float64) * R[D]
        for p, tab in tabs:
            qv *= tab[D % p]
        area = qv * math.pi
        if mode == "areas":
            area_chunks.append(area)
            continue
        inside = area < Xf - guard
        count += int(np.count_nonzero(inside))
        if mode == "pairs":
            inside = inside.copy()
        for jj in j[np.abs(area - Xf) <= guard].tolist():
            c = c_start - jj
            if compare_to_threshold(ExactArea(_exact_q(d, m, c)), X) < 0:
                count += 1
                if mode == "pairs":
                    inside[jj - lo] = True
        if mode == "pairs":
            for jj in j[inside].tolist():
                pairs.append((m, c_start - jj))
    if mode == "areas":
        areas = (
            np.concatenate(area_chunks) if area_chunks else np.empty(0, dtype=np.float64)
        )
        cs = c_start - np.arange(total, dtype=np.int64)
        return areas, cs
    return count, pairs


def _pool_scan(args):
    d, m, X, bf, mode = args
    return m, _scan_m(d, m, X, bf, mode)


def _scan_all(d: int, X: Fraction, bound_factor: int, mode: str, jobs: int | None):
    """Run _scan_m over every residue m, optionally across processes.

    Workers are forked after the weight array cache is warm, so they share
    the big read-only arrays; results merge in ascending m either way."""
    ms = list(range(d))
    if jobs is None:
        jobs = os.cpu_count() or 1
    results = {}
    if jobs > 1 and hasattr(os, "fork"):
        # d0 = d minimizes the envelope coefficient, so its cap dominates
        cap = _dyadic_D_cap(_uniform_bound_coeff(d, d), X * bound_factor)
        weight_ratio_array(d, max(cap, 2))
        with ProcessPoolExecutor(max_workers=min(jobs, len(ms))) as ex:
            for m, res in ex.map(
                _pool_scan, [(d, m, X, bound_factor, mode) for m in ms]
            ):
                results[m] = res
    else:
        for m in ms:
            results[m] = _scan_m(d, m, X, bound_factor, mode)
    return [results[m] for m in ms]


def enumerate_surfaces(d: int, X, bound_factor: int = 1, jobs: int | None = 1) -> list[SurfaceRecord]:
    """All surface records with area strictly below X, sorted by
    (q, m, c, r); every (m, c) appears once per divisor class r.

    Intended for record listings at moderate thresholds: each survivor gets
    an exact rational area.  Use xi or surface_counts for large scans."""
    _require_admissible(d)
    X = Fraction(X)
    if X <= 0:
        return []
    per_m = _scan_all(d, X, bound_factor, mode="pairs", jobs=jobs)
    rs = divisors_below_sqrt(d)
    records = []
    for _, pairs in per_m:
        for m, c in pairs:
            g = gcd(m, d)
            d0 = d // g
            D = (m * m * d - c * d * d) // (g * g)
            q = _exact_q(d, m, c)
            for r in rs:
                records.append(SurfaceRecord(m, c, r, d0, D, q))
    records.sort(key=lambda t: (t.q, t.m, t.c, t.r))
    return records


def xi(d: int, X, jobs: int | None = 1) -> int:
    """Number of surfaces with area below X: per-(m, c) count times the
    number of divisor classes."""
    _require_admissible(d)
    X = Fraction(X)
    if X <= 0:
        return 0
    per_m = _scan_all(d, X, bound_factor=1, mode="count", jobs=jobs)
    return sum(count for count, _ in per_m) * len(divisors_below_sqrt(d))


def surface_counts(d: int, thresholds: list, jobs: int | None = 1) -> list[int]:
    """xi at several thresholds from one scan at the largest of them.

    Bulk decisions ride on float areas; only candidates inside the guard
    band around a threshold are re-decided exactly."""
    _require_admissible(d)
    xs = [Fraction(x) for x in thresholds]
    if any(x <= 0 for x in xs):
        raise ValueError("thresholds must be positive")
    per_m = _scan_all(d, max(xs), bound_factor=1, mode="areas", jobs=jobs)
    mult = len(divisors_below_sqrt(d))
    out = []
    for x in xs:
        xf = float(x)
        guard = 1e-9 * xf + 1e-12
        n = 0
        for m, (areas, cs) in enumerate(per_m):
            n += int(np.count_nonzero(areas < xf - guard))
            for k in np.nonzero(np.abs(areas - xf) <= guard)[0].tolist():
                q = _exact_q(d, m, int(cs[k]))
                if compare_to_threshold(ExactArea(q), x) < 0:
                    n += 1
        out.append(n * mult)
    return out


@dataclass(frozen=True)
class FitRow:
    X: Fraction
    xi: int
    ratio: float
    leading: float
    rel_deviation: float


def fit_report(d: int, thresholds: list, jobs: int | None = 1, prime_limit: int = 10_000_000) -> list[FitRow]:
    """Empirical slope check: xi(X)/X against the leading constant."""
    xs = [Fraction(x) for x in thresholds]
    if xs != sorted(xs):
        raise ValueError("thresholds must be ascending")
    counts = surface_counts(d, xs, jobs=jobs)
    L = leading_constant(d, prime_limit=prime_limit).l_main
    rows = []
    for x, n in zip(xs, counts):
        ratio = n / float(x)
        rows.append(FitRow(x, n, ratio, L, abs(ratio - L) / L))
    return rows


# --- Euler-product constants ---------------------------------------------


@dataclass(frozen=True)
class ConstantValue:
    d: int
    value: float
    truncation_prime: int
    prime_count: int
    tail_bound: float
    certified_digits: int


@dataclass(frozen=True)
class ConstantReport:
    d: int
    l_main: float
    l_main_bound: float
    l_census_form: float
    l_census_bound: float
    truncation_prime: int
    prime_count: int
    chain_gap: float


_SUMS_CACHE: dict = {}


def _euler_log_sums(ds: tuple[int, ...], limit: int):
    """One pass over all primes below limit, accumulating per-d log-sums of
    the main-product factor and the C factor; returns ({d: (main, c)}, N)."""
    key = (ds, limit)
    if key in _SUMS_CACHE:
        return _SUMS_CACHE[key]
    tables = {d: character(d).residue_table() for d in ds}
    sums = {d: [0.0, 0.0] for d in ds}
    nprimes = 0
    for block in prime_blocks(limit):
        nprimes += len(block)
        pf = block.astype(np.float64)
        for d in ds:
            ch = tables[d][block % d].astype(np.float64)
            x_main = ((1.0 / pf) - ch * ch - ch) / (pf * pf)
            x_c = -ch / (pf * (pf + ch))
            sums[d][0] += float(np.sum(np.log1p(x_main)))
            sums[d][1] += float(np.sum(np.log1p(x_c)))
    result = ({d: tuple(v) for d, v in sums.items()}, nprimes)
    _SUMS_CACHE[key] = result
    return result


def _prime_square_tail(nprimes: int) -> float:
    """Certified bound on sum of 1/p^2 over primes beyond the first
    nprimes, from p_n > n log n."""
    n = nprimes
    return 1.0 / (n * math.log(n) ** 2)


def constant_C(d: int, digits: int = 12, prime_limit: int | None = None) -> ConstantValue:
    """The counting constant prod_p (1 - 1/p + 1/(p + chi(p))), truncated
    with the documented tail bound 2 * sum_{p>P} p^-2 <= 2/(P-1).

    The truncation prime grows with the digit request up to the default
    cap; the certificate reports what the tail bound actually supports.
    """
    if prime_limit is None:
        prime_limit = min(2 * 10**digits + 1, DEFAULT_PRIME_LIMIT)
    sums, nprimes = _euler_log_sums((d,), prime_limit)
    value = math.exp(sums[d][1])
    tail = 2.0 / (prime_limit - 1)
    certified = max(0, int(-math.log10(tail)))
    return ConstantValue(d, value, prime_limit, nprimes, tail, certified)


def _tau(d: int) -> int:
    return divisor_stats(d)[0]


def leading_constant(d: int, prime_limit: int | None = None, _sums=None) -> ConstantReport:
    """Both Euler-product forms of the linear coefficient of xi(X).

    l_main: prefactor tau(d) pi/4 (5 pi/12 for d = 4) times the full-product
    form.  l_census_form: 3 C tau(d) / (2 pi) times the d-local factors
    (collapsing to 15 C / (4 pi) for d = 4).  Shares one prime stream so the
    identity between the forms survives truncation up to the p^-2 tail.
    """
    res = is_admissible(d)
    if not res.admissible:
        raise ValueError(f"d = {d} is not admissible: {res.reason}")
    if prime_limit is None:
        prime_limit = DEFAULT_PRIME_LIMIT
    if _sums is None:
        sums, nprimes = _euler_log_sums((d,), prime_limit)
    else:
        sums, nprimes = _sums
    s_main, s_c = sums[d]
    tail2 = _prime_square_tail(nprimes)
    if d == 4:
        pref_main = 5 * math.pi / 12
        pref_census = 15 / (4 * math.pi)
        census_local = 1.0
    else:
        pref_main = _tau(d) * math.pi / 4
        pref_census = 3 * _tau(d) / (2 * math.pi)
        census_local = float(
            math.prod(
                1 + Fraction(1, p * p) / (1 - Fraction(1, p))
                for p, _ in factorize(d).factors
            )
        )
    l_main = pref_main * math.exp(s_main)
    l_census = pref_census * math.exp(s_c) * census_local
    l_main_bound = l_main * math.expm1(2.01 * tail2) + 1e-13 * l_main
    l_census_bound = l_census * math.expm1(1.01 * tail2) + 1e-13 * l_census
    return ConstantReport(
        d,
        l_main,
        l_main_bound,
        l_census,
        l_census_bound,
        prime_limit,
        nprimes,
        abs(l_main - l_census),
    )


def leading_constants_bundle(ds: tuple[int, ...], prime_limit: int | None = None) -> dict[int, ConstantReport]:
    """leading_constant for several d sharing a single prime pass."""
    if prime_limit is None:
        prime_limit = DEFAULT_PRIME_LIMIT
    sums, nprimes = _euler_log_sums(tuple(ds), prime_limit)
    return {
        d: leading_constant(d, prime_limit, _sums=({d: sums[d]}, nprimes)) for d in ds
    }


def _euler_phi(a: int) -> int:
    out = a
    for p, _ in factorize(a).factors if a > 1 else ():
        out = out // p * (p - 1)
    return out


@dataclass(frozen=True)
class ResidueCheck:
    d: int
    a: int
    product_form: float
    closed_form: float
    tolerance: float


def residue_constant_check(d: int, a: int, prime_limit: int = 10_000_000) -> ResidueCheck:
    """The Dirichlet-residue identity at s = 1: the displayed convergent
    product times prod_{p|a}(1 - 1/p) against phi(a) C / a."""
    for p, _ in factorize(a).factors if a > 1 else ():
        if d % p:
            raise ValueError(f"prime {p} of modulus a = {a} does not divide d = {d}")
    chi = character(d)
    table = chi.residue_table()
    logsum = 0.0
    for block in prime_blocks(prime_limit):
        pf = block.astype(np.float64)
        ch = table[block % d].astype(np.float64)
        # 1 - 1/p + (1 + chi/p)^-1 / p, evaluated literally
        factor = 1.0 - 1.0 / pf + 1.0 / (1.0 + ch / pf) / pf
        logsum += float(np.sum(np.log(factor)))
    lhs = math.exp(logsum)
    for p, _ in factorize(a).factors if a > 1 else ():
        lhs *= 1 - 1 / p
    Cv = constant_C(d, prime_limit=prime_limit)
    rhs = _euler_phi(a) * Cv.value / a
    tol = 2 * Cv.tail_bound + 4.0 / (prime_limit - 1)
    return ResidueCheck(d, a, lhs, rhs, tol)
