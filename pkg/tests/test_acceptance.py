"""Acceptance suite: runs every criterion at its stated tolerance and
prints one pass/fail line per criterion (shared implementation with
`qflab verify full`)."""

import pytest

from qflab import verify


def _run(check):
    result = verify.run_check(check, fast=False)
    print(result.line())
    assert result.passed, result.line()


def test_criterion_01_table_rows():
    """Published functional values for A in {1, 5, 10, 28, 34.5} within 5e-4."""
    _run(verify.check_table_rows)


def test_criterion_02_gap_constant():
    """Gap-interval constant in (1.80, 1.837); ratio in (0.90, 0.91833)."""
    _run(verify.check_gap_constant)


def test_criterion_03_density_identity():
    """g(ell) = residue density exactly, squarefree ell <= 30, D <= 500."""
    _run(verify.check_density_identity)


def test_criterion_04_poisson_identity():
    """Relative gap < 1e-9 on {D <= 50} x {ell <= 6} x {t in 0.5, 1, 2}."""
    _run(verify.check_poisson_grid)


def test_criterion_05_error_scaling():
    """Congruence-sum error exponent <= 0.40 on x in [1e3, 1e7]."""
    _run(verify.check_error_scaling)


def test_criterion_06_class_numbers():
    """Analytic class number equals enumeration for fundamental D <= 1000."""
    _run(verify.check_class_numbers)


def test_criterion_07_radial_transform():
    """Transform at 0 matches closed form within 1e-8; decay fixtures hold."""
    _run(verify.check_transform)


def test_criterion_08_sieve_soundness():
    """Selberg bound >= exact sieved sum on 50 random tuples."""
    _run(verify.check_sieve_soundness)


def test_criterion_09_gap_scan():
    """Max normalized gap < 1.837 up to 1e6; constant windows on 1000 tuples."""
    _run(verify.check_gap_scan)


def test_criterion_10_gaussian_family():
    """Closed-form Gaussian values within 1e-6 and negative at A = 100."""
    _run(verify.check_gaussian_family)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v", "-s"]))
