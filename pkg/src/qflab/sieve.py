"""Selberg-sieve upper bounds, short-interval prime-count bounds, and
prime-gap scans over primes represented by a form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arith import DensityG, prime_mask
from .forms import QuadraticForm, delta_f, enumerate_reduced_forms, is_reduced
from .latticesums import BudgetError, congruence_sum_exact

__all__ = [
    "SingularWeightError",
    "SieveSetup",
    "SieveBound",
    "PrimeGapRecord",
    "BTBound",
    "selberg_j",
    "sieve_upper_bound",
    "sieved_sum_exact",
    "represented_mask",
    "represented_primes",
    "count_represented_primes",
    "bt_theoretical_bound",
    "cor_brun_bound",
    "prime_gap_scan",
]

_MASK_BUDGET = 300_000_000


class SingularWeightError(ValueError):
    """A sieve weight g(p)/(1 - g(p)) is singular (g(p) = 1)."""


def _primes_below(z: float) -> list[int]:
    limit = int(math.floor(z))
    if limit < 2:
        return []
    mask = prime_mask(limit)
    return [int(p) for p in np.flatnonzero(mask)]


@dataclass(frozen=True)
class SieveSetup:
    """Sieving data: the form, the cutoff z, and the primes <= z whose
    product is the sifting modulus.  Construction verifies every weight
    g(p)/(1 - g(p)) is finite."""

    form: QuadraticForm
    z: float
    primes: tuple[int, ...]

    @classmethod
    def build(cls, form: QuadraticForm, z: float) -> "SieveSetup":
        if z < 2:
            raise ValueError("need z >= 2")
        density = DensityG(form)
        primes = tuple(_primes_below(z))
        for p in primes:
            if density.at_prime(p) >= 1:
                raise SingularWeightError(f"g({p}) = {density.at_prime(p)} >= 1")
        return cls(form, z, primes)


def selberg_j(f: QuadraticForm, z: float) -> Fraction:
    """J = sum of h(ell) over squarefree ell < z built from primes <= z,
    where h(ell) = prod over p | ell of g(p)/(1 - g(p)).  Exact rational."""
    setup = SieveSetup.build(f, z)
    density = DensityG(f)
    primes = list(setup.primes)
    weights = [density.at_prime(p) / (1 - density.at_prime(p)) for p in primes]
    total = Fraction(0)

    def extend(idx: int, prod: int, hval: Fraction):
        nonlocal total
        total += hval
        for i in range(idx, len(primes)):
            nxt = prod * primes[i]
            if nxt < z:
                extend(i + 1, nxt, hval * weights[i])

    extend(0, 1, Fraction(1))
    return total


def _error_moduli(primes: list[int], z: float) -> list[tuple[int, int]]:
    """Squarefree moduli ell = lcm(l1, l2) realizable with l1, l2 < z,
    paired with their prime count; all satisfy ell < z^2."""
    out: list[tuple[int, int]] = []

    def realizable(factors: tuple[int, ...]) -> bool:
        total = math.prod(factors)
        # some split d * (total/d) with both parts < z
        for msk in range(1 << len(factors)):
            d = math.prod(factors[i] for i in range(len(factors)) if msk >> i & 1) if msk else 1
            if d < z and total // d < z:
                return True
        return False

    def extend(idx: int, prod: int, factors: tuple[int, ...]):
        if realizable(factors):
            out.append((prod, len(factors)))
        for i in range(idx, len(primes)):
            nxt = prod * primes[i]
            if nxt < z * z:
                extend(i + 1, nxt, factors + (primes[i],))

    extend(0, 1, ())
    return out


@dataclass(frozen=True)
class SieveBound:
    main: float
    error_sum: float
    x: float
    y: float
    z: float

    @property
    def bound(self) -> float:
        return self.main + self.error_sum

    def record(self) -> dict:
        return {"x": self.x, "y": self.y, "z": self.z, "main": self.main,
                "error_sum": self.error_sum, "bound": self.bound}


def sieve_upper_bound(f: QuadraticForm, x: float, y: float, z: float) -> SieveBound:
    """Selberg upper bound for the r_f-weighted count of n in (x-y, x] that
    are coprime to every prime <= z.

    Main term (2*pi*y/sqrt(D))/J; the remainder sums tau_3(ell)*|E_ell| over
    the moduli the sieve weights can actually reach, with each E_ell
    computed exactly from two congruence sums.
    """
    if z < 2:
        raise ValueError("need z >= 2")
    if y < 0 or x - y < 0:
        raise ValueError("need 0 <= y <= x")
    density = DensityG(f)
    jj = selberg_j(f, z)
    sd = math.sqrt(f.D)
    main = 2.0 * math.pi * y / sd / float(jj)
    err = 0.0
    for ell, nprimes in _error_moduli(_primes_below(z), z):
        g_ell = float(density.at_squarefree(ell))
        interval = congruence_sum_exact(f, ell, x) - congruence_sum_exact(f, ell, x - y)
        e_ell = interval - 2.0 * math.pi * y * g_ell / sd
        err += 3**nprimes * abs(e_ell)
    return SieveBound(main, err, x, y, z)


def sieved_sum_exact(f: QuadraticForm, x: float, y: float, z: float) -> int:
    """Exact r_f-weighted count of n in (x-y, x] coprime to every prime <= z,
    by direct lattice enumeration against a coprimality mask.  Independent of
    the Selberg machinery; the upper bound is validated against this."""
    X = math.floor(x)
    lo = math.floor(x - y)
    if X < 1:
        return 0
    a, b, c, D = f.a, f.b, f.c, f.D
    coprime = np.ones(X + 1, dtype=bool)
    for p in np.flatnonzero(prime_mask(int(z))):
        coprime[::p] = False
    total = 0
    vmax = math.isqrt(4 * a * X // D)
    for v in range(-vmax, vmax + 1):
        m = 4 * a * X - D * v * v
        t = math.isqrt(m)
        lo_u = -((t + b * v) // (2 * a))
        hi_u = (t - b * v) // (2 * a)
        u = np.arange(lo_u, hi_u + 1, dtype=np.int64)
        vals = a * u * u + (b * v) * u + c * v * v
        vals = vals[vals > lo]
        total += int(np.count_nonzero(coprime[vals]))
    return total


def represented_mask(f: QuadraticForm, x: float) -> np.ndarray:
    """Boolean array m with m[n] True iff 1 <= n <= x is represented by f."""
    X = math.floor(x)
    if X < 1:
        return np.zeros(max(X + 1, 1), dtype=bool)
    if X > _MASK_BUDGET:
        raise BudgetError(f"representation mask of size {X} exceeds budget")
    a, b, c, D = f.a, f.b, f.c, f.D
    mask = np.zeros(X + 1, dtype=bool)
    vmax = math.isqrt(4 * a * X // D)
    for v in range(-vmax, vmax + 1):
        m = 4 * a * X - D * v * v
        tt = math.isqrt(m)
        lo = -((tt + b * v) // (2 * a))
        hi = (tt - b * v) // (2 * a)
        u = np.arange(lo, hi + 1, dtype=np.int64)
        vals = a * u * u + (b * v) * u + c * v * v
        mask[vals] = True
    mask[0] = False
    return mask


def represented_primes(f: QuadraticForm, x: float) -> np.ndarray:
    """Sorted primes <= x represented by f."""
    X = math.floor(x)
    rep = represented_mask(f, x)
    return np.flatnonzero(rep & prime_mask(X))


def count_represented_primes(f: QuadraticForm, x: float) -> int:
    """pi_f(x): number of primes <= x represented by f."""
    return int(represented_primes(f, x).size)


@dataclass(frozen=True)
class BTBound:
    constant: float
    range_ok: bool
    theta: float


def bt_theoretical_bound(f: QuadraticForm, x: float, y: float, variant: str,
                         eps: float = 0.01) -> BTBound:
    """Leading Brun-Titchmarsh-type constant for short-interval prime counts,
    plus a flag for whether (x, y) lies in the variant's validity range.

    Variants by interval-length regime: "cuberoot_range" (y down to
    ~x^(1/3), constant 4/(1-theta)), "mid_range" (x^(4/9) <= y <= x^(3/5),
    constant 7/(1-theta)), "sqrt_range" (y down to ~x^(1/2), constant
    2/(1-theta)).  Out-of-range inputs are flagged, not rejected, so
    constant-vs-range landscapes can be charted.
    """
    if not is_reduced(f):
        raise ValueError("form must be reduced")
    if x <= 1 or y <= 1:
        raise ValueError("need x > 1 and y > 1")
    a, D = f.a, f.D
    lx, ly, lD, la = math.log(x), math.log(y), math.log(D), math.log(a)
    slack = 1e-9  # boundary comparisons in log space
    if variant == "cuberoot_range":
        if not 0 < eps < 0.05:
            raise ValueError("need 0 < eps < 1/20 for cuberoot_range")
        theta = lx / (3 * ly) + (4.0 / 3.0 + eps) * lD / ly - la / ly
        numer = 4.0
        range_ok = (2 * lD - la + (1.0 / 3.0 + eps) * lx <= ly + slack
                    and ly <= (4.0 / 9.0) * lx + slack)
    elif variant == "mid_range":
        theta = lx / (4 * ly) + (31.0 / 12.0) * lD / ly - (7.0 / 4.0) * la / ly
        numer = 7.0
        range_ok = ((4.0 / 9.0) * lx <= ly + slack
                    and ly <= 0.6 * lx + slack and lx >= 18 * lD - slack)
    elif variant == "sqrt_range":
        if eps <= 0:
            raise ValueError("need eps > 0 for sqrt_range")
        theta = lx / (2 * ly) + (0.75 + eps / 4.0) * lD / ly - la / (2 * ly)
        numer = 2.0
        range_ok = ((0.5 + eps) * (2 * lD - la + lx) <= ly + slack
                    and ly <= lx + slack)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return BTBound(numer / (1.0 - theta), bool(range_ok), theta)


@lru_cache(maxsize=None)
def _class_number(D: int) -> int:
    return len(enumerate_reduced_forms(D))


def cor_brun_bound(f: QuadraticForm, x: float) -> float:
    """Leading term 28 * delta_f * sqrt(x) / (h(-D) * log x) bounding
    pi_f(x + sqrt(x)) - pi_f(x)."""
    if x < 3:
        raise ValueError("need x >= 3")
    return 28.0 * float(delta_f(f)) * math.sqrt(x) / (_class_number(f.D) * math.log(x))


@dataclass(frozen=True)
class PrimeGapRecord:
    p_n: int
    p_next: int

    @property
    def normalized_gap(self) -> float:
        return (self.p_next - self.p_n) / (math.sqrt(self.p_n) * math.log(self.p_n))

    def record(self) -> dict:
        return {"p_n": self.p_n, "p_next": self.p_next,
                "gap": self.p_next - self.p_n, "normalized": self.normalized_gap}


def prime_gap_scan(f: QuadraticForm, X: float,
                   min_p: int = 100) -> tuple[PrimeGapRecord, list[PrimeGapRecord]]:
    """Consecutive represented primes up to X with normalized gaps
    (p' - p)/(sqrt(p) log p); the maximum is taken over p >= min_p to keep
    small-prime log noise out.  Returns (max_record, all_records)."""
    primes = represented_primes(f, X)
    if primes.size < 2:
        raise ValueError(f"fewer than two represented primes up to {X:g}")
    records = [PrimeGapRecord(int(p), int(q)) for p, q in zip(primes, primes[1:])]
    eligible = [r for r in records if r.p_n >= min_p]
    pool = eligible if eligible else records
    best = max(pool, key=lambda r: r.normalized_gap)
    return best, records
