import math
import random
from fractions import Fraction

import pytest

from conftest import random_form
from qflab.arith import (
    ConvergenceError,
    class_number_analytic,
    dirichlet_l1,
    divisor_tau,
    divisor_tau3,
    g_squarefree,
    is_fundamental,
    is_squarefree,
    kronecker,
    prime_mask,
    primes_up_to,
    residue_density,
)
from qflab.forms import QuadraticForm, enumerate_reduced_forms


def test_kronecker_examples():
    assert kronecker(-4, 5) == 1
    assert kronecker(-4, 2) == 0
    assert kronecker(-4, 3) == -1


def test_kronecker_against_euler_criterion():
    for p in [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]:
        for m in range(-20, 21):
            expected = pow(m % p, (p - 1) // 2, p)
            expected = {0: 0, 1: 1, p - 1: -1}[expected]
            assert kronecker(m, p) == expected, (m, p)


def test_kronecker_multiplicative_and_periodic():
    rng = random.Random(9)
    for _ in range(10_000):
        D = rng.choice([3, 4, 7, 8, 11, 15, 20, 23, 24])
        m = rng.randint(1, 10**6)
        n = rng.randint(1, 10**6)
        assert kronecker(-D, m * n) == kronecker(-D, m) * kronecker(-D, n)
        assert kronecker(-D, m + 4 * D) == kronecker(-D, m)


def test_kronecker_char_type():
    from qflab.arith import KroneckerChar

    rng = random.Random(21)
    for D in (3, 4, 23, 108):
        ch = KroneckerChar(D)
        for _ in range(300):
            n = rng.randint(1, 10**5)
            v = ch(n)
            assert v in (-1, 0, 1)
            assert (v == 0) == (math.gcd(n, D) > 1)
            m = rng.randint(1, 10**4)
            assert ch(n * m) == ch(n) * ch(m)


def test_g_squarefree_examples():
    f = QuadraticForm(1, 0, 1)
    assert g_squarefree(f, 1) == Fraction(1)
    assert g_squarefree(f, 2) == Fraction(1, 2)
    assert g_squarefree(f, 5) == Fraction(9, 25)
    with pytest.raises(ValueError):
        g_squarefree(f, 4)


def test_residue_density_examples():
    f = QuadraticForm(1, 0, 1)
    assert residue_density(f, 1) == Fraction(1)
    assert residue_density(f, 5) == Fraction(9, 25)
    assert residue_density(f, 2) == Fraction(1, 2)


def test_residue_density_brute_force():
    rng = random.Random(17)
    for _ in range(25):
        f = random_form(rng, max_a=9, max_extra=15)
        ell = rng.randint(1, 12)
        count = sum(1 for u in range(ell) for v in range(ell)
                    if f(u, v) % ell == 0)
        assert residue_density(f, ell) == Fraction(count, ell * ell)


def test_density_identity_on_small_range():
    # exact rational equality on squarefree moduli (full range in acceptance)
    sf = [l for l in range(1, 31) if is_squarefree(l)]
    for D in range(3, 61):
        if D % 4 not in (0, 3):
            continue
        for f in enumerate_reduced_forms(D):
            for ell in sf:
                assert g_squarefree(f, ell) == residue_density(f, ell)


def test_density_bound_tau_over_ell():
    f = QuadraticForm(2, 1, 3)
    for ell in range(1, 1001):
        if not is_squarefree(ell):
            continue
        assert abs(g_squarefree(f, ell)) <= Fraction(divisor_tau(ell), ell)


def test_residue_density_multiplicative():
    f = QuadraticForm(1, 1, 6)
    for l1 in range(1, 101):
        for l2 in range(1, 101 // l1):
            if math.gcd(l1, l2) != 1 or l1 * l2 > 100:
                continue
            assert residue_density(f, l1 * l2) == \
                residue_density(f, l1) * residue_density(f, l2)


def test_l1_chi_closed_forms():
    assert dirichlet_l1(4, tol=1e-12) == pytest.approx(math.pi / 4, abs=1e-11)
    assert dirichlet_l1(3, tol=1e-12) == pytest.approx(math.pi / (3 * math.sqrt(3)), abs=1e-11)
    v = dirichlet_l1(23)
    w = 2
    assert round(w * math.sqrt(23) * v / (2 * math.pi)) == 3


def test_l1_chi_errors():
    with pytest.raises(ValueError):
        dirichlet_l1(108)  # 108 = 4*27, 27 = 3 mod 4: not fundamental
    with pytest.raises(ConvergenceError):
        dirichlet_l1(4, tol=1e-30, max_level=4)


def test_class_number_analytic():
    assert class_number_analytic(4) == 1
    assert class_number_analytic(23) == 3
    with pytest.raises(ValueError):
        class_number_analytic(108)


def test_primes_up_to():
    assert list(primes_up_to(10)) == [2, 3, 5, 7]
    assert list(primes_up_to(2)) == [2]
    assert list(primes_up_to(1)) == []
    count = sum(1 for _ in primes_up_to(10**6))
    assert count == 78498
    # spot checks by trial division
    ps = list(primes_up_to(2000))
    for p in ps[::97]:
        assert all(p % d for d in range(2, math.isqrt(p) + 1))


def test_prime_mask_agrees_with_generator():
    mask = prime_mask(5000)
    assert sorted(int(p) for p in primes_up_to(5000)) == \
        [n for n in range(5001) if mask[n]]


def test_divisor_functions():
    assert divisor_tau(1) == 1 and divisor_tau3(1) == 1
    assert divisor_tau(12) == 6
    assert divisor_tau3(4) == 6
    for n in range(1, 61):
        triples = sum(1 for d1 in range(1, n + 1) for d2 in range(1, n + 1)
                      if n % d1 == 0 and (n // d1) % d2 == 0)
        assert divisor_tau3(n) == triples
        assert divisor_tau(n) == sum(1 for d in range(1, n + 1) if n % d == 0)


def test_is_fundamental():
    assert is_fundamental(3) and is_fundamental(4) and is_fundamental(23)
    assert is_fundamental(8) and is_fundamental(20)
    assert not is_fundamental(108)
    assert not is_fundamental(12)  # 4*3, 3 = 3 mod 4
    assert not is_fundamental(9)
