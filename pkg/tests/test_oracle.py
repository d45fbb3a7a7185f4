import math
import warnings

import numpy as np
import pytest

from nuspectra.angular import RingParams
from nuspectra.oracle import (
    ConvergenceError,
    Grid,
    GridWarning,
    angular_solve,
    bisect_eigenvalues,
    pekeris_error_scan,
    pekeris_relative_error,
    quadrature,
    radial_solve,
    refinement_ratio,
    richardson,
    sturm_count,
    tridiagonal_eigh,
)
from nuspectra.specfun import jacobi_eval, jacobi_norm


def test_grid_invariants():
    g = Grid(0.0, 1.0, 11)
    assert g.spacing == pytest.approx(0.1)
    assert g.interior.size == 9
    assert g.refined().n_points == 21
    with pytest.raises(ValueError):
        Grid(0.0, 1.0, 2)
    with pytest.raises(ValueError):
        Grid(1.0, 0.0, 10)


def test_square_well():
    s = radial_solve(lambda x: 0 * x, Grid(0.0, 1.0, 4000), 3)
    exact = np.arange(1, 4) ** 2 * math.pi**2 / 2
    assert np.max(np.abs(s.eigenvalues / exact - 1)) < 1e-4


def test_harmonic_oscillator():
    s = radial_solve(lambda x: 0.5 * x * x, Grid(-12.0, 12.0, 12001), 2)
    assert np.max(np.abs(s.eigenvalues - [0.5, 1.5])) < 1e-6
    coarse = radial_solve(lambda x: 0.5 * x * x, Grid(-12.0, 12.0, 4001), 4).eigenvalues
    fine = radial_solve(lambda x: 0.5 * x * x, Grid(-12.0, 12.0, 8001), 4).eigenvalues
    assert np.max(np.abs(richardson(coarse, fine) - (np.arange(4) + 0.5))) < 1e-6


def test_node_count_sturm_and_normalisation():
    s = radial_solve(lambda x: 0.5 * x * x, Grid(-10.0, 10.0, 2001), 5)
    for i, v in enumerate(s.eigenvectors):
        big = v[np.abs(v) > 1e-8 * np.max(np.abs(v))]
        assert np.count_nonzero(np.diff(np.sign(big))) == i
        assert np.sum(v * v) * s.grid.spacing == pytest.approx(1.0, abs=1e-8)
    assert s.sturm_counts == 5
    assert np.all(np.diff(s.eigenvalues) > 0)
    assert np.max(s.residual_norms) < 1e-8


def test_second_order_convergence():
    vals = [radial_solve(lambda x: 0.5 * x * x, Grid(-12, 12, n), 3).eigenvalues for n in (1001, 2001, 4001)]
    ratio = refinement_ratio(*vals)
    assert np.all((ratio > 3.5) & (ratio < 4.5))


def test_bisection_matches_lapack():
    rng = np.random.default_rng(3)
    d = rng.normal(size=200)
    e = rng.normal(size=199)
    w1, v1 = tridiagonal_eigh(d, e, 6, "lapack")
    w2, v2 = tridiagonal_eigh(d, e, 6, "bisection")
    assert np.allclose(w1, w2, atol=1e-12)
    assert np.allclose(np.abs(np.sum(v1 * v2, axis=1)), 1.0, atol=1e-8)
    assert np.array_equal(sturm_count(d, e, w1[:3] + 1e-9), [1, 2, 3])
    assert np.allclose(bisect_eigenvalues(d, e, [0, 1]), w1[:2], atol=1e-12)


def test_degenerate_spectrum_raises():
    from nuspectra import oracle

    d = np.array([1.0, 1.0, 5.0])
    e = np.array([0.0, 0.0])
    w, v = tridiagonal_eigh(d, e, 2, "lapack")
    with pytest.raises(ConvergenceError):
        oracle._finish(d, e, w, v, Grid(0, 1, 5), np.arange(3.0), 0.25)


def test_grid_warning():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        radial_solve(lambda x: 0.5 * x * x, Grid(-12, 12, 41), 2, check_refinement=True, tol=1e-8)
    assert any(issubclass(w.category, GridWarning) for w in caught)


def test_nonfinite_potential_rejected():
    with pytest.raises(ValueError), np.errstate(divide="ignore"):
        radial_solve(lambda x: 1 / x, Grid(-1, 1, 11), 1)


@pytest.mark.parametrize("D", [3, 4])
def test_angular_free_spectrum(D):
    a = angular_solve(RingParams(), D, 0.0, 2000, 4).eigenvalues
    b = angular_solve(RingParams(), D, 0.0, 4000, 4).eigenvalues
    exact = np.array([l * (l + D - 2) for l in range(4)])
    assert np.max(np.abs(richardson(a, b) - exact)) < 1e-6


def test_angular_associated_legendre_spectrum():
    a = angular_solve(RingParams(), 3, 1.0, 2000, 3).eigenvalues
    b = angular_solve(RingParams(), 3, 1.0, 4000, 3).eigenvalues
    assert np.max(np.abs(richardson(a, b) - [2, 6, 12])) < 1e-6


def test_angular_eigenvectors_normalised():
    s = angular_solve(RingParams(0.2, 0.1, -0.3), 4, 3.0, 1000, 3)
    w = np.sin(s.x) ** 2
    for v in s.eigenvectors:
        assert np.sum(v * v * w) * (math.pi / 1000) == pytest.approx(1.0, abs=1e-8)


def test_quadrature_examples():
    assert quadrature(np.sin, 0, math.pi).value == pytest.approx(2.0, abs=1e-10)
    p23 = quadrature(lambda y: jacobi_eval(2, 0, 0, y) * jacobi_eval(3, 0, 0, y), -1, 1)
    assert abs(p23.value) < 1e-10 and p23.converged
    rng = np.random.default_rng(11)
    for _ in range(20):
        n = int(rng.integers(0, 8))
        a, b = rng.uniform(-0.9, 5, size=2)
        q = quadrature(lambda y: jacobi_eval(n, a, b, y) ** 2, -1, 1, endpoint_powers=(b, a))
        assert q.value == pytest.approx(jacobi_norm(n, a, b), rel=1e-9)


def test_quadrature_nonconvergence_flag():
    res = quadrature(lambda x: np.sin(1 / x), 1e-4, 1, n=2, max_doublings=1)
    assert not res.converged


def test_pekeris_scan():
    assert float(pekeris_relative_error(0.5)) == pytest.approx(0.0138, abs=5e-4)
    assert float(pekeris_relative_error(1e-3)) < 1e-9
    scan = pekeris_error_scan(2.0, 2001)
    assert scan.x[0] > 0 and scan.x[-1] == pytest.approx(2.0)
    assert set(scan.crossings) == {0.01, 0.05, 0.10}
    c = scan.crossings
    assert c[0.01] < c[0.05] < c[0.10]
    for t, x in c.items():
        assert float(pekeris_relative_error(x)) == pytest.approx(t, rel=1e-8)
    assert isinstance(scan.monotone, bool)
    assert scan.max_error == pytest.approx(np.max(scan.rel_error))
