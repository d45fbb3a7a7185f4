import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from nuspectra.oracle import quadrature
from nuspectra.specfun import (
    DomainError,
    PoleError,
    _hyp3f2_terms,
    gen_binomial,
    hyp3f2_terminating,
    jacobi_derivative,
    jacobi_eval,
    jacobi_moment,
    jacobi_norm,
    jacobi_ode_residual,
    jacobi_sum_form,
    log_gamma,
    pochhammer,
)

params = st.floats(-0.9, 5.0)


@given(st.floats(-30.0, 60.0))
def test_log_gamma_matches_mpmath(x):
    assume(not (x <= 0 and abs(x - round(x)) < 1e-6))
    value, sign = log_gamma(x)
    ref = mpmath.gamma(x)
    assert sign == (1 if ref > 0 else -1)
    assert value == pytest.approx(float(mpmath.log(abs(ref))), rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("x", [0, -1, -7])
def test_log_gamma_poles(x):
    with pytest.raises(PoleError):
        log_gamma(x)


def test_log_gamma_half():
    assert log_gamma(0.5)[0] == pytest.approx(0.5 * math.log(math.pi))
    assert log_gamma(-0.5) == (pytest.approx(math.log(2 * math.sqrt(math.pi))), -1)


@given(st.integers(0, 30), st.integers(0, 30))
def test_gen_binomial_integers(n, k):
    assert gen_binomial(n, k) == pytest.approx(math.comb(n, k))


@given(st.floats(-10, 10), st.integers(0, 12))
def test_gen_binomial_real(top, k):
    assert gen_binomial(top, k) == pytest.approx(float(mpmath.binomial(top, k)), rel=1e-10, abs=1e-10)


def test_gen_binomial_negative_k():
    with pytest.raises(DomainError):
        gen_binomial(3.0, -1)


def _f32_exact(n, p2, p3, q1, q2):
    total, term = Fraction(1), Fraction(1)
    for j in range(n):
        term *= Fraction(-n + j) * (p2 + j) * (p3 + j) / ((q1 + j) * (q2 + j) * (j + 1))
        total += term
    return total


fracs = st.fractions(min_value=Fraction(1, 8), max_value=Fraction(6), max_denominator=8)


@given(st.integers(0, 8), fracs, fracs, fracs, fracs)
def test_hyp3f2_against_exact_rationals(n, p2, p3, q1, q2):
    exact = float(_f32_exact(n, p2, p3, q1, q2))
    args = (n, float(p2), float(p3), float(q1), float(q2))
    got = hyp3f2_terminating(*args)
    # rounding bound for a sum of n+1 terms each off by a few n ulps
    bound = 8 * (n + 1) * 2.2e-16 * sum(abs(t) for t in _hyp3f2_terms(*args))
    assert abs(got - exact) <= max(bound, 1e-15 * abs(exact))


@given(st.integers(0, 10), params, params, st.floats(0.1, 6), st.floats(0.1, 6))
def test_hyp3f2_parameter_swaps_bit_identical(n, p2, p3, q1, q2):
    base = hyp3f2_terminating(n, p2, p3, q1, q2)
    assert hyp3f2_terminating(n, p3, p2, q1, q2) == base
    assert hyp3f2_terminating(n, p2, p3, q2, q1) == base


def test_hyp3f2_saalschutz():
    # balanced series: 3F2(-n, a, b; c, 1+a+b-c-n; 1) = (c-a)_n (c-b)_n / ((c)_n (c-a-b)_n)
    n, a, b, c = 5, 0.3, 1.7, 2.9
    lhs = hyp3f2_terminating(n, a, b, c, 1 + a + b - c - n)
    rhs = pochhammer(c - a, n) * pochhammer(c - b, n) / (pochhammer(c, n) * pochhammer(c - a - b, n))
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_hyp3f2_pole():
    with pytest.raises(PoleError):
        hyp3f2_terminating(3, 1.0, 1.0, -1.0, 2.0)


@given(st.integers(0, 8), params, params, st.floats(-1, 1))
def test_jacobi_matches_mpmath(n, a, b, y):
    # terminating hypergeometric sum at 50 digits; mpmath.jacobi trips on exact zeros
    with mpmath.workdps(50):
        z = (mpmath.mpf(y) - 1) / 2
        ref = float(sum(mpmath.binomial(n, k) * mpmath.rf(n + a + b + 1, k) * mpmath.rf(a + k + 1, n - k) * z**k
                        for k in range(n + 1)) / mpmath.factorial(n))
    assert jacobi_eval(n, a, b, y) == pytest.approx(ref, rel=1e-10, abs=1e-10)


def test_jacobi_against_rodrigues():
    import sympy as sp

    yy = sp.symbols("y")
    a, b = sp.Rational(1, 3), sp.Rational(5, 2)
    for n in range(5):
        w = (1 - yy) ** a * (1 + yy) ** b
        rod = sp.simplify((-1) ** n / (2**n * sp.factorial(n)) / w * sp.diff(w * (1 - yy * yy) ** n, yy, n))
        for y in (-0.7, 0.1, 0.8):
            assert jacobi_eval(n, float(a), float(b), y) == pytest.approx(float(rod.subs(yy, y)), rel=1e-12, abs=1e-12)


@given(st.integers(0, 10), params, params)
def test_jacobi_endpoint_value(n, a, b):
    assert jacobi_eval(n, a, b, 1.0) == pytest.approx(gen_binomial(n + a, n), rel=1e-12, abs=1e-12)


def test_jacobi_array_and_scalar():
    y = np.linspace(-1, 1, 7)
    arr = jacobi_eval(3, 0.5, 1.5, y)
    assert arr.shape == y.shape
    assert isinstance(jacobi_eval(3, 0.5, 1.5, 0.2), float)
    assert arr[2] == jacobi_eval(3, 0.5, 1.5, y[2])


def test_jacobi_recurrence_fallback():
    # a + b = -2 makes the leading recurrence coefficient vanish at k = 2
    for y in (-0.5, 0.3, 0.9):
        assert jacobi_eval(2, -1.5, -0.5, y) == pytest.approx(float(mpmath.jacobi(2, -1.5, -0.5, y)), rel=1e-12)


def test_jacobi_negative_degree():
    with pytest.raises(DomainError):
        jacobi_eval(-1, 0, 0, 0.0)


@given(st.integers(0, 6), params, params)
def test_sum_form_identity(n, a, b):
    y = np.linspace(-1, 1, 21)
    p = jacobi_eval(n, a, b, y)
    assert np.max(np.abs(jacobi_sum_form(n, a, b, y) - p) / np.maximum(1, np.abs(p))) < 1e-10


@given(st.integers(0, 8), params, params)
def test_ode_residual(n, a, b):
    y = np.linspace(-0.99, 0.99, 17)
    assert np.max(np.abs(jacobi_ode_residual(n, a, b, y))) < 1e-8


def test_derivative_matches_finite_difference():
    n, a, b, y, h = 5, 0.4, 2.2, 0.3, 1e-5
    fd = (jacobi_eval(n, a, b, y + h) - jacobi_eval(n, a, b, y - h)) / (2 * h)
    assert jacobi_derivative(n, a, b, y) == pytest.approx(fd, rel=1e-8)
    assert jacobi_derivative(2, a, b, y, order=3) == 0.0


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 8), params, params)
def test_norm_against_quadrature(n, a, b):
    q = quadrature(lambda t: jacobi_eval(n, a, b, t) ** 2, -1, 1, endpoint_powers=(b, a)).value
    assert jacobi_norm(n, a, b) == pytest.approx(q, rel=1e-9)


def test_norm_legendre_and_limits():
    for n in range(6):
        assert jacobi_norm(n, 0, 0) == pytest.approx(2 / (2 * n + 1))
    assert jacobi_norm(0, -0.5, -0.5) == pytest.approx(math.pi)
    with pytest.raises(DomainError):
        jacobi_norm(2, -1.0, 0.5)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 6), params, params, st.floats(-0.5, 4), st.floats(-0.5, 4))
def test_moment_against_quadrature(n, a, b, c, d):
    q = quadrature(lambda t: jacobi_eval(n, a, b, t), -1, 1, endpoint_powers=(d, c)).value
    assert jacobi_moment(n, a, b, c, d) == pytest.approx(q, rel=1e-8, abs=1e-10)


def test_moment_divergent():
    with pytest.raises(DomainError):
        jacobi_moment(1, 0.5, 0.5, -1.0, 0.0)
