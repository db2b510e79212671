import math
import random
from fractions import Fraction

import numpy as np
import pytest

from conftest import brute_congruence_sum, random_form
from qflab.arith import divisor_tau, residue_density
from qflab.forms import QuadraticForm, enumerate_reduced_forms, representation_count
from qflab.latticesums import (
    BudgetError,
    TestFunctionG,
    chi_hat,
    congruence_main_term,
    congruence_sum_exact,
    error_scaling_report,
    hankel_transform,
    hat_g_at_zero,
    poisson_identity_check,
    translation_exception_count,
)
from qflab.quadrature import ToleranceError, adaptive_quad


def reduced_forms_up_to(dmax):
    out = []
    for D in range(3, dmax + 1):
        if D % 4 in (0, 3):
            out.extend(enumerate_reduced_forms(D).forms)
    return out


# ---- congruence sums ---------------------------------------------------------


def test_congruence_sum_examples():
    f = QuadraticForm(1, 0, 1)
    assert congruence_sum_exact(f, 1, 5) == 20
    assert congruence_sum_exact(f, 2, 5) == 8
    assert congruence_sum_exact(f, 1, 0.5) == 0


def test_congruence_sum_brute_force():
    rng = random.Random(23)
    for _ in range(40):
        f = random_form(rng, max_a=5, max_extra=9)
        ell = rng.randint(1, 8)
        x = rng.uniform(0.5, 400.0)
        assert congruence_sum_exact(f, ell, x) == brute_congruence_sum(f, ell, x)


def test_congruence_sum_budget():
    with pytest.raises(BudgetError):
        congruence_sum_exact(QuadraticForm(1, 0, 1), 1, 1e18)


def test_main_term_examples():
    f = QuadraticForm(1, 0, 1)
    assert congruence_main_term(f, 1, 5) == pytest.approx(5 * math.pi, rel=1e-15)
    assert congruence_main_term(f, 2, 5) == pytest.approx(5 * math.pi / 2, rel=1e-15)
    assert congruence_main_term(QuadraticForm(1, 1, 1), 1, 10) == \
        pytest.approx(20 * math.pi / math.sqrt(3), rel=1e-15)


def test_error_scaling_report():
    f = QuadraticForm(1, 0, 1)
    rep = error_scaling_report(f, 1, [1000.0])
    assert rep.slope is None and len(rep.rows) == 1

    rep = error_scaling_report(f, 1, np.logspace(3, 5, 6))
    assert rep.slope is not None and rep.slope <= 0.40

    rep = error_scaling_report(f, 6, np.logspace(4, 6, 5))
    assert all(abs(r.record()["normalized_half"]) <= 5.0 for r in rep.rows)


def test_prefix_sum_identity():
    # per-n summation equals lattice-interval counting, exactly
    rng = random.Random(31)
    for _ in range(1000):
        f = random_form(rng, max_a=4, max_extra=6)
        x = rng.uniform(1, 250)
        direct = sum(representation_count(f, n) for n in range(1, math.floor(x) + 1))
        assert congruence_sum_exact(f, 1, x) == direct


def test_weighted_bump_sum_two_routes():
    # sum of r_f(n) G(sqrt(n)) over multiples of ell: by-n route vs lattice route
    f = QuadraticForm(2, 1, 3)
    g = TestFunctionG(50.0, 9.0)
    ell = 3
    by_n = math.fsum(representation_count(f, n) * g(math.sqrt(n))
                     for n in range(0, 60, ell))
    bu = math.isqrt(4 * f.c * 59 // f.D) + 2
    bv = math.isqrt(4 * f.a * 59 // f.D) + 2
    by_lattice = math.fsum(
        g(math.sqrt(f(u, v)))
        for u in range(-bu, bu + 1) for v in range(-bv, bv + 1)
        if f(u, v) <= 59 and f(u, v) % ell == 0)
    assert by_n == pytest.approx(by_lattice, rel=1e-12)


def test_congruence_error_sandwich():
    # recorded fixture: |exact - main| <= C1 * tau(ell) * ell * sqrt(x)
    C1 = 6.0
    rng = random.Random(7)
    for _ in range(30):
        f = random_form(rng, max_a=4, max_extra=8)
        ell = rng.randint(1, 6)
        x = rng.uniform(50, 5000)
        err = abs(congruence_sum_exact(f, ell, x) - congruence_main_term(f, ell, x))
        assert err <= C1 * divisor_tau(ell) * ell * math.sqrt(x)


# ---- Fourier coefficients and the Poisson identity ---------------------------


def test_chi_hat_examples():
    f = QuadraticForm(1, 0, 1)
    assert chi_hat(f, 1, 0, 0) == pytest.approx(1.0)
    assert chi_hat(f, 2, 0, 0) == pytest.approx(0.5)
    ghat5 = float(residue_density(f, 5))
    for r in range(5):
        for s in range(5):
            assert abs(chi_hat(f, 5, r, s)) <= ghat5 + 1e-12
    with pytest.raises(ValueError):
        chi_hat(f, 2, 2, 0)


def test_chi_hat_matches_direct_sum():
    f = QuadraticForm(2, 1, 3)
    ell = 6
    for r, s in [(0, 0), (1, 0), (2, 3), (5, 5)]:
        acc = 0j
        for u in range(ell):
            for v in range(ell):
                if f(u, v) % ell == 0:
                    acc += np.exp(-2j * math.pi * (u * s + v * r) / ell)
        assert chi_hat(f, ell, r, s) == pytest.approx(acc / ell**2, abs=1e-12)


def test_poisson_identity_selfdual_closed_form():
    theta = math.fsum(math.exp(-math.pi * n * n) for n in range(-40, 41))
    lhs, rhs = poisson_identity_check(QuadraticForm(1, 0, 1), 1, 1.0)
    assert lhs == pytest.approx(theta * theta, rel=1e-12)
    assert abs(lhs - rhs) / lhs < 1e-12


def test_poisson_identity_cases():
    for f, ell, t in [(QuadraticForm(1, 0, 1), 2, 1.0),
                      (QuadraticForm(1, 1, 1), 3, 0.7)]:
        lhs, rhs = poisson_identity_check(f, ell, t)
        assert abs(lhs - rhs) / lhs < 1e-10


def test_poisson_identity_grid_subset():
    for f in reduced_forms_up_to(24):
        for ell in range(1, 7):
            for t in (0.5, 1.0, 2.0):
                lhs, rhs = poisson_identity_check(f, ell, t)
                assert abs(lhs - rhs) / abs(lhs) < 1e-9, (f, ell, t)


# ---- translation exceptions --------------------------------------------------


def brute_exception_count(f, ell, r, s, box=10):
    count = 0
    for u in range(-box, box + 1):
        for v in range(-box, box + 1):
            lhs = f(u * ell - r, v * ell - s) * Fraction(1, ell * ell)
            if lhs < Fraction(f(u, v), 2):
                count += 1
    return count


def test_translation_exceptions_examples():
    f = QuadraticForm(1, 0, 1)
    assert translation_exception_count(f, 2, 1, 0) == 1
    assert translation_exception_count(f, 2, 1, 1) == brute_exception_count(f, 2, 1, 1)
    with pytest.raises(ValueError):
        translation_exception_count(f, 2, 0, 0)
    with pytest.raises(ValueError):
        translation_exception_count(QuadraticForm(3, 5, 6), 2, 1, 0)  # not reduced


def test_translation_exceptions_brute_and_bound():
    rng = random.Random(13)
    from qflab.forms import reduce_form

    checked = 0
    while checked < 100:
        f = reduce_form(random_form(rng, max_a=12, max_extra=30))
        if f.D > 10**4:
            continue
        ell = rng.randint(1, 10)
        r, s = rng.randrange(ell), rng.randrange(ell)
        if (r, s) == (0, 0):
            continue
        n = translation_exception_count(f, ell, r, s)
        if checked % 10 == 0:
            assert n == brute_exception_count(f, ell, r, s, box=12)
        assert n <= 40.0 * math.sqrt(f.D) / f.a, (f, ell, r, s, n)
        checked += 1


# ---- the radial bump and its transform --------------------------------------


def test_bump_values():
    g = TestFunctionG(4.0, 1.0)
    assert g(0.0) == 0.0
    assert g(1.5) == 1.0
    assert g(math.sqrt(5.0)) == 0.0
    assert g(10.0) == 0.0
    assert g(0.5) == 0.25
    arr = g(np.array([0.0, 1.0, 2.1]))
    assert arr == pytest.approx([0.0, 1.0, (5 - 2.1**2) / 1.0])


def test_hat_zero_closed_form():
    assert hat_g_at_zero(1, 1) == pytest.approx(math.pi)
    assert hat_g_at_zero(4, 2) == pytest.approx(4.5 * math.pi)


def test_transform_matches_closed_form_at_zero():
    for x, y in [(1, 1), (10, 3), (100, 10)]:
        v = hankel_transform(TestFunctionG(x, y), 0.0, tol=1e-9)
        assert v == pytest.approx(hat_g_at_zero(x, y), abs=1e-8)


def test_transform_large_argument_values():
    assert hankel_transform(TestFunctionG(100, 10), 0.0, tol=1e-7) == \
        pytest.approx(104.5 * math.pi, abs=1e-6)
    v = hankel_transform(TestFunctionG(100, 10), 2.0, tol=1e-9)
    assert abs(v) * 2.0**1.5 / 110.0**0.25 <= 10.0


def test_transform_decay_fixtures():
    for x, y in [(100, 10), (10**4, 10**2)]:
        g = TestFunctionG(x, y)
        for xi in (1.0, 2.0, 4.0, 8.0):
            v = abs(hankel_transform(g, xi, tol=1e-9))
            assert v * xi**1.5 / (x + y) ** 0.25 <= 0.25
            assert v * xi**2.5 / (1 + x**0.75 / y) <= 0.25


def test_j0_against_series_oracle():
    """scipy's Bessel J0 against a 50-term power series evaluated in
    high-precision arithmetic."""
    import mpmath
    from scipy.special import j0

    mpmath.mp.dps = 60
    for t in np.linspace(0.0, 30.0, 121):
        tm = mpmath.mpf(float(t))
        acc = mpmath.mpf(0)
        term_base = (tm / 2) ** 2
        for k in range(50):
            acc += (-1) ** k * term_base**k / (mpmath.factorial(k)) ** 2
        assert abs(float(j0(float(t))) - float(acc)) < 1e-10, t


def test_adaptive_quad_tolerance_error():
    spike = lambda x: np.abs(np.sin(1000.0 * x)) ** 0.2
    with pytest.raises(ToleranceError):
        adaptive_quad(spike, 0.0, 10.0, tol=1e-14, max_panels=12)
