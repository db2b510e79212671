"""Fourier-optimization engine: the bandlimited cosine family and the
Gaussian-polynomial family, the tail-penalty functionals, greedy search
over integer coefficient grids, and the prime-gap constant evaluator.

The bandlimited family is H(x) = cos(2*pi*x) * sum a_j/((2j-1)^2 - 16x^2),
dilated as F(x) = H(x/lambda).  Its transform is computed in closed form:
each term contributes (pi/(4m)) * (-1)^(j-1) * cos(pi*m*t/2) on [-1, 1]
(m = 2j-1) and vanishes outside, so F is Paley-Wiener bandlimited to
[-1/lambda, 1/lambda].  The closed form is cross-validated against an
independent quadrature oracle in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from numpy.polynomial import hermite as _herm

from .quadrature import (GAUSS_INDICES, GAUSS_WEIGHTS, KRONROD_NODES,
                         KRONROD_WEIGHTS, adaptive_quad, quad_segments)

__all__ = [
    "BandlimitedFn",
    "GaussPolyFn",
    "FunctionalReport",
    "SearchResult",
    "eval_h",
    "hat_h",
    "h_l1_norm",
    "functional_report",
    "gap_constant",
    "greedy_search",
    "gauss_poly_hat_coeffs",
    "gauss_poly_report",
    "dn_estimate",
]

_POLE_GUARD = 1e-3
_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class BandlimitedFn:
    """F(x) = H(x/lam) with H the cosine-over-quadratics sum for coeffs."""

    coeffs: tuple[float, ...]
    lam: float = 1.0

    def __post_init__(self):
        if not any(self.coeffs):
            raise ValueError("need at least one nonzero coefficient")
        if not 0.0 < self.lam <= 1.2:
            raise ValueError("need 0 < lam <= 1.2")

    def __call__(self, x):
        return eval_h(self.coeffs, np.asarray(x, dtype=np.float64) / self.lam)


@dataclass(frozen=True)
class GaussPolyFn:
    """F(x) = P(x) * exp(-pi*x^2), P given by ascending power coefficients."""

    poly_coeffs: tuple[float, ...]

    def __post_init__(self):
        if not any(self.poly_coeffs):
            raise ValueError("polynomial must not be identically zero")

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        return np.polynomial.polynomial.polyval(x, np.asarray(self.poly_coeffs)) \
            * np.exp(-math.pi * x * x)


def eval_h(coeffs, x):
    """Evaluate H(x); removable singularities at x = (2j-1)/4 are handled by
    a short series for the offending term within |x - pole| < 1e-3."""
    x_arr = np.asarray(x, dtype=np.float64)
    ax = np.abs(x_arr)
    cos_all = np.cos(_TWO_PI * ax)
    out = np.zeros_like(ax)
    for j, aj in enumerate(coeffs, start=1):
        if aj == 0:
            continue
        m = 2 * j - 1
        delta = ax - 0.25 * m
        near = np.abs(delta) < _POLE_GUARD
        denom = np.where(near, 1.0, m * m - 16.0 * ax * ax)
        direct = cos_all / denom
        d = np.where(near, delta, 0.0)
        # cos(2*pi*x)/(m^2-16x^2) = sign * (sin(2*pi*d)/d) / (8m*(1 + 2d/m))
        sin_over = _TWO_PI - _TWO_PI**3 * d * d / 6.0 + _TWO_PI**5 * d**4 / 120.0
        q = 2.0 * d / m
        geo = 1.0 - q + q * q - q**3 + q**4
        sign = 1.0 if j % 2 == 1 else -1.0
        series = sign * sin_over * geo / (8.0 * m)
        out = out + aj * np.where(near, series, direct)
    if out.ndim == 0:
        return float(out)
    return out


def hat_h(coeffs, t):
    """Transform of the undilated H: sum over j of
    a_j * (pi/(4m)) * (-1)^(j-1) * cos(pi*m*t/2) for |t| < 1, exactly 0 beyond."""
    t_arr = np.asarray(t, dtype=np.float64)
    at = np.abs(t_arr)
    inside = at < 1.0
    out = np.zeros_like(at)
    for j, aj in enumerate(coeffs, start=1):
        if aj == 0:
            continue
        m = 2 * j - 1
        k = math.pi / (4.0 * m) * (1.0 if j % 2 == 1 else -1.0)
        out = out + np.where(inside, aj * k * np.cos(0.5 * math.pi * m * at), 0.0)
    if out.ndim == 0:
        return float(out)
    return out


# ----- L1 norm of H ---------------------------------------------------------

_grid_cache: dict[float, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}


def _cosine_panel_grid(x0: float):
    """Panel edges at the zeros of cos(2*pi*x): 0, 1/4, 3/4, ..., x0."""
    if x0 in _grid_cache:
        return _grid_cache[x0]
    edges = [0.0]
    z = 0.25
    while z < x0:
        edges.append(z)
        z += 0.5
    edges.append(x0)
    edges = np.array(edges)
    mids = 0.5 * (edges[1:] + edges[:-1])
    halfs = 0.5 * (edges[1:] - edges[:-1])
    nodes = mids[:, None] + halfs[:, None] * KRONROD_NODES[None, :]
    _grid_cache[x0] = (edges, halfs, nodes)
    return _grid_cache[x0]


def _rational_part_roots(coeffs) -> list[float]:
    """Positive x where sum a_j/(m_j^2 - 16x^2) vanishes (numerator roots)."""
    n = len(coeffs)
    total = np.zeros(n, dtype=np.float64)
    for j, aj in enumerate(coeffs, start=1):
        if aj == 0:
            continue
        poly = np.array([1.0])
        for k in range(1, n + 1):
            if k == j:
                continue
            mk = 2 * k - 1
            poly = np.convolve(poly, np.array([mk * mk, -16.0]))  # in y = x^2
        total[: poly.size] += aj * poly[::-1]
    scale = np.max(np.abs(total))
    if scale == 0:
        return []
    trimmed = np.trim_zeros(np.where(np.abs(total) > 1e-13 * scale, total, 0.0), "b")
    if trimmed.size < 2:
        return []
    roots = np.roots(trimmed[::-1])
    out = []
    for r in roots:
        if abs(r.imag) < 1e-9 and r.real > 0:
            out.append(math.sqrt(r.real))
    return out


def h_l1_norm(coeffs, tol: float = 1e-9) -> float:
    """Integral of |H| over the line.

    [0, X0] is integrated on panels between consecutive zeros of cos(2*pi*x)
    (refined where the rational part changes sign); the remaining tail uses
    the mean of |cos| against the exact integral of the rational part, valid
    once the rational part has constant sign.  The neglected oscillatory
    remainder is of order sum|a_j| / X0^2, far below the acceptance
    tolerances here.
    """
    x0 = 40.0
    roots = _rational_part_roots(coeffs)
    if roots and max(roots) >= x0 - 1.0:
        x0 = 1.5 * max(roots) + 10.0
    edges, halfs, nodes = _cosine_panel_grid(x0)
    vals = np.abs(eval_h(coeffs, nodes.ravel()).reshape(nodes.shape))
    ik = halfs * (vals @ KRONROD_WEIGHTS)
    ig = halfs * (vals[:, GAUSS_INDICES] @ GAUSS_WEIGHTS)
    errs = np.abs(ik - ig)
    per_panel = tol / (4.0 * len(halfs))
    bad = np.flatnonzero(errs > per_panel)
    pieces = [float(v) for i, v in enumerate(ik) if i not in set(bad.tolist())]
    absfun = lambda x: np.abs(eval_h(coeffs, x))
    for i in bad:
        sub_edges = [edges[i], edges[i + 1]]
        for r in roots:
            if edges[i] < r < edges[i + 1]:
                sub_edges.insert(-1, r)
        val, _ = quad_segments(absfun, sorted(sub_edges), tol=per_panel,
                               max_panels=400)
        pieces.append(val)
    body = 2.0 * math.fsum(pieces)  # both half-lines, H even
    tail_main = math.fsum(
        aj / (8.0 * (2 * j - 1)) * math.log((4 * x0 - (2 * j - 1)) / (4 * x0 + (2 * j - 1)))
        for j, aj in enumerate(coeffs, start=1) if aj
    )
    tail = 2.0 * (2.0 / math.pi) * abs(tail_main)
    return body + tail


# ----- functionals -----------------------------------------------------------


@dataclass(frozen=True)
class FunctionalReport:
    f_at_zero: float
    l1_norm: float
    tail_pos: float
    tail_abs: float
    A: float

    @property
    def j_plus(self) -> float:
        return (self.f_at_zero - self.A * self.tail_pos) / self.l1_norm

    @property
    def j_abs(self) -> float:
        return (abs(self.f_at_zero) - self.A * self.tail_abs) / self.l1_norm

    def record(self) -> dict:
        return {"f_at_zero": self.f_at_zero, "l1_norm": self.l1_norm,
                "tail_pos": self.tail_pos, "tail_abs": self.tail_abs,
                "A": self.A, "j_plus": self.j_plus, "j_abs": self.j_abs}


def _sign_segments(fun, lo: float, hi: float, samples: int = 512) -> list[float]:
    """Edges lo..hi with interior points at sign changes of fun (bisected)."""
    ts = np.linspace(lo, hi, samples)
    vs = fun(ts)
    edges = [lo]
    for i in range(samples - 1):
        a, b = float(vs[i]), float(vs[i + 1])
        if a == 0.0 or a * b >= 0.0:
            continue
        x1, x2 = float(ts[i]), float(ts[i + 1])
        f1 = a
        for _ in range(60):
            mid = 0.5 * (x1 + x2)
            fm = float(fun(mid))
            if fm == 0.0 or x2 - x1 < 1e-15:
                break
            if f1 * fm < 0:
                x2 = mid
            else:
                x1, f1 = mid, fm
        edges.append(0.5 * (x1 + x2))
    edges.append(hi)
    return edges


def _hat_tails(coeffs, lam: float, tol: float) -> tuple[float, float]:
    """(positive-part, absolute) tail mass of F-hat outside [-1, 1].

    With F = H(./lam), substitution reduces both to integrals of H-hat over
    [lam, 1]; empty when lam >= 1.
    """
    if lam >= 1.0:
        return 0.0, 0.0
    fun = lambda t: hat_h(coeffs, t)
    edges = _sign_segments(fun, lam, 1.0)
    pos = 0.0
    total = 0.0
    for a, b in zip(edges, edges[1:]):
        val, _ = adaptive_quad(fun, a, b, tol=tol, max_panels=800)
        total += abs(val)
        if val > 0:
            pos += val
    return 2.0 * pos, 2.0 * total


def functional_report(fn, A: float, tol: float = 1e-9) -> FunctionalReport:
    """F(0), the L1 norm, the two tail integrals, and the derived functional
    values for a bandlimited or Gaussian-polynomial function."""
    if isinstance(fn, GaussPolyFn):
        return gauss_poly_report(fn, A)
    if A < 1:
        raise ValueError("need A >= 1")
    coeffs, lam = fn.coeffs, fn.lam
    f0 = eval_h(coeffs, 0.0)
    l1 = lam * h_l1_norm(coeffs, tol=tol)
    tail_pos, tail_abs = _hat_tails(coeffs, lam, tol=max(tol, 1e-12))
    return FunctionalReport(f0, l1, tail_pos, tail_abs, float(A))


def gap_constant(fn, A: float, alpha: float, delta: Fraction, h: int) -> float:
    """Prime-gap interval constant 2*(delta+alpha)*h/delta * ||F||_1 /
    (F(0) - A * positive tail); raises when the function is inadmissible."""
    if h < 1:
        raise ValueError("need h >= 1")
    if alpha < 0:
        raise ValueError("need alpha >= 0")
    rep = functional_report(fn, A)
    denom = rep.f_at_zero - A * rep.tail_pos
    if denom <= 0:
        raise ValueError(f"inadmissible function: F(0) - A*tail = {denom:g} <= 0")
    return 2.0 * float((Fraction(delta) + Fraction(alpha).limit_denominator(10**9))
                       / Fraction(delta)) * h * rep.l1_norm / denom


# ----- greedy search ---------------------------------------------------------

_SEED_ANCHORS = [
    ((68.0, 5.0, 1.0), 0.98644),
    ((270.0, 21.0, 4.0), 0.988),
    ((297.0, 18.0, 1.0), 0.977),
    ((243.0, 9.0, -5.0), 0.9586),
    ((81.0, -69.0, 0.0), 0.1),
    ((189.0, -63.0, -20.0), 0.66),
]

_STEPS = (27.0, 9.0, 3.0, 1.0, -1.0, -3.0, -9.0, -27.0)


@dataclass(frozen=True)
class SearchResult:
    fn: BandlimitedFn
    report: FunctionalReport
    evaluations: int
    exhausted: bool


def _golden_max(fun, lo: float, hi: float, tol: float = 1e-5):
    """Golden-section maximization on [lo, hi]; returns (x, fun(x), evals)."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fun(c), fun(d)
    evals = 2
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fun(d)
        evals += 1
    return (c, fc, evals) if fc > fd else (d, fd, evals)


def greedy_search(A: float, n_terms: int = 3, budget: int = 4000) -> SearchResult:
    """Coordinate ascent over integer coefficient grids (steps +-1, 3, 9, 27)
    interleaved with golden-section refinement of the dilation on
    [0.1, 1.05], from a fixed deterministic seed list.  Budget caps the
    number of functional evaluations; exhaustion returns best-so-far with a
    flag."""
    if A < 1:
        raise ValueError("need A >= 1")
    if not 1 <= n_terms <= 5:
        raise ValueError("need 1 <= n_terms <= 5")
    lam_lo, lam_hi = 0.1, 1.05
    evals = 0
    exhausted = False

    def objective(coeffs, lam):
        nonlocal evals
        evals += 1
        f0 = eval_h(coeffs, 0.0)
        l1 = lam * h_l1_norm(coeffs, tol=1e-8)
        tp, _ = _hat_tails(coeffs, lam, tol=1e-10)
        return (f0 - A * tp) / l1

    def fit(coeffs, lam):
        if lam == 0.0:
            return coeffs, 0.0, -math.inf
        return coeffs, lam, objective(coeffs, lam)

    seeds = [tuple([1.0] + [0.0] * (n_terms - 1))] + [
        tuple((list(c) + [0.0] * n_terms)[:n_terms]) for c, _ in _SEED_ANCHORS
    ]
    seed_lams = [1.0] + [l for _, l in _SEED_ANCHORS]
    best = (-math.inf, (), 0.0)

    def refine_lam(coeffs, lam):
        nonlocal evals
        # coarse bracket first: the objective need not be unimodal in lam
        grid = np.linspace(lam_lo, lam_hi, 20)
        vals = [objective(coeffs, g) for g in grid]
        i = int(np.argmax(vals))
        lo = grid[max(i - 1, 0)]
        hi = grid[min(i + 1, len(grid) - 1)]
        x, fx, used = _golden_max(lambda g: objective(coeffs, g), lo, hi)
        return (x, fx) if fx > vals[i] else (float(grid[i]), vals[i])

    for coeffs, lam0 in zip(seeds, seed_lams):
        if not any(coeffs):
            continue
        if evals >= budget:
            exhausted = True
            break
        lam, j_cur = refine_lam(coeffs, lam0)
        improved = True
        while improved and evals < budget:
            improved = False
            for i in range(n_terms):
                cand_best = None
                for step in _STEPS:
                    if evals >= budget:
                        break
                    cand = list(coeffs)
                    cand[i] += step
                    if not any(cand):
                        continue
                    j = objective(tuple(cand), lam)
                    if j > j_cur + 1e-12 and (cand_best is None or j > cand_best[0]):
                        cand_best = (j, tuple(cand))
                if cand_best is not None:
                    j_cur, coeffs = cand_best
                    improved = True
            if improved and evals < budget:
                lam, j_new = refine_lam(coeffs, lam)
                j_cur = max(j_cur, j_new)
        key = (j_cur, tuple(-c for c in coeffs))
        best_key = (best[0], tuple(-c for c in best[1])) if best[1] else (-math.inf, ())
        if key > best_key:
            best = (j_cur, coeffs, lam)
        if evals >= budget:
            exhausted = True
            break

    fn = BandlimitedFn(best[1], best[2])
    return SearchResult(fn, functional_report(fn, A), evals, exhausted)


# ----- Gaussian-polynomial family --------------------------------------------


def gauss_poly_hat_coeffs(poly_coeffs) -> np.ndarray:
    """Power-basis coefficients Q with F-hat(t) = Q(t) * exp(-pi*t^2).

    The basis H_k(sqrt(2*pi) x) exp(-pi x^2) (physicists' Hermite) is an
    eigenbasis of the transform with eigenvalues (-i)^k, so the transform is
    exact coefficient arithmetic.
    """
    p = np.asarray(poly_coeffs, dtype=np.complex128)
    k = np.arange(p.size)
    q = p * (2.0 * math.pi) ** (-k / 2.0)
    herm_c = _herm.poly2herm(q)
    herm_c = herm_c * (-1j) ** np.arange(herm_c.size)
    r = _herm.herm2poly(herm_c)
    return r * (2.0 * math.pi) ** (np.arange(r.size) / 2.0)


def _real_roots_in(poly_coeffs, lo: float, hi: float) -> list[float]:
    p = np.trim_zeros(np.asarray(poly_coeffs, dtype=np.float64), "b")
    if p.size < 2:
        return []
    roots = np.roots(p[::-1])
    return sorted(float(r.real) for r in roots
                  if abs(r.imag) < 1e-9 and lo < r.real < hi)


def gauss_poly_report(fn: GaussPolyFn, A: float, tol: float = 1e-10) -> FunctionalReport:
    """Functional report for F = P(x) exp(-pi x^2) with the transform taken
    exactly in the Hermite eigenbasis.  The positive-part tail uses the real
    part of F-hat (exact for even F; F-hat is complex Hermitian otherwise)."""
    p = np.asarray(fn.poly_coeffs, dtype=np.float64)
    f0 = float(p[0])
    cut = 8.0  # exp(-pi*64) ~ 1e-88, beyond any tolerance here
    edges = [-cut] + _real_roots_in(p, -cut, cut) + [cut]
    l1, _ = quad_segments(lambda x: np.abs(fn(x)), edges, tol=tol, max_panels=2000)

    hat = gauss_poly_hat_coeffs(fn.poly_coeffs)

    def hat_vals(t):
        t = np.asarray(t, dtype=np.float64)
        return np.polynomial.polynomial.polyval(t, hat) * np.exp(-math.pi * t * t)

    abs_fun = lambda t: np.abs(hat_vals(t))
    tail_abs = 2.0 * quad_segments(
        abs_fun, [1.0] + _real_roots_in(np.abs(hat) ** 2, 1.0, cut) + [cut],
        tol=tol, max_panels=2000)[0]

    re_hat = hat.real
    re_fun = lambda t: np.maximum(np.real(hat_vals(t)), 0.0)
    tail_pos = 2.0 * quad_segments(
        re_fun, [1.0] + _real_roots_in(re_hat, 1.0, cut) + [cut],
        tol=tol, max_panels=2000)[0]
    return FunctionalReport(f0, l1, tail_pos, tail_abs, float(A))


def dn_estimate(n: int, budget: int = 3000) -> float:
    """Lower estimate of the best concentration ratio
    int_{-1}^{1} |F| / int |F| over F = P(x) exp(-pi x^2), deg P <= n,
    by coordinate ascent on the coefficient sphere (monotone in n since the
    search for degree d starts from the degree d-1 optimum)."""
    if n < 0:
        raise ValueError("need n >= 0")
    evals = 0

    def ratio(coeffs) -> float:
        nonlocal evals
        evals += 1
        fn = GaussPolyFn(tuple(coeffs))
        cut = 8.0
        edges = [-cut, -1.0] + _real_roots_in(coeffs, -cut, cut) + [1.0, cut]
        edges = sorted(set(edges))
        total = 0.0
        inner = 0.0
        for a, b in zip(edges, edges[1:]):
            val, _ = adaptive_quad(lambda x: np.abs(fn(x)), a, b, tol=1e-10,
                                   max_panels=600)
            total += val
            if a >= -1.0 and b <= 1.0:
                inner += val
        return inner / total

    coeffs = [1.0]
    best = ratio(coeffs)
    for deg in range(1, n + 1):
        coeffs = coeffs + [0.0]
        for step in (0.5, 0.1, 0.02):
            improved = True
            while improved and evals < budget:
                improved = False
                for i in range(len(coeffs)):
                    for sgn in (1.0, -1.0):
                        if evals >= budget:
                            break
                        cand = list(coeffs)
                        cand[i] += sgn * step
                        norm = math.sqrt(sum(c * c for c in cand))
                        if norm == 0.0:
                            continue
                        cand = [c / norm for c in cand]
                        r = ratio(cand)
                        if r > best + 1e-12:
                            best, coeffs = r, cand
                            improved = True
    return best
