"""Independent numerical checks: finite-difference eigensolvers for the radial
and angular problems, quadrature, and the centrifugal-approximation error
scan."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate, linalg, optimize

BISECTION_STEPS = 100
INVERSE_ITERATION_STEPS = 20


class ConvergenceError(RuntimeError):
    pass


class GridWarning(UserWarning):
    """Halving the grid spacing moved an eigenvalue more than expected."""


@dataclass(frozen=True)
class Grid:
    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if self.n_points < 3:
            raise ValueError("a grid needs at least 3 points")
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")

    @property
    def spacing(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)

    @property
    def interior(self) -> np.ndarray:
        return self.points[1:-1]

    def refined(self) -> "Grid":
        return Grid(self.x_min, self.x_max, 2 * self.n_points - 1)


@dataclass
class NumericSpectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # shape (count, len(x))
    grid: Grid
    x: np.ndarray  # sample points of the eigenvectors
    residual_norms: np.ndarray
    sturm_counts: np.ndarray = field(default_factory=lambda: np.array([]))


# --- symmetric tridiagonal eigenproblem -------------------------------------

def sturm_count(diag, off, x) -> np.ndarray:
    """Number of eigenvalues of the symmetric tridiagonal matrix below ``x``.

    Counts negative pivots of the LDL^T factorisation of T - x I.
    Vectorised over an array of shifts.
    """
    d = np.asarray(diag, dtype=float)
    e2 = np.asarray(off, dtype=float) ** 2
    x = np.atleast_1d(np.asarray(x, dtype=float))
    tiny = np.finfo(float).tiny ** 0.5
    count = np.zeros(x.shape, dtype=int)
    q = d[0] - x
    q = np.where(q == 0.0, -tiny, q)
    count += q < 0
    for i in range(1, d.size):
        q = d[i] - x - e2[i - 1] / q
        q = np.where(q == 0.0, -tiny, q)
        count += q < 0
    return count


def _gershgorin(d, e):
    r = np.zeros_like(d)
    r[:-1] += np.abs(e)
    r[1:] += np.abs(e)
    return float(np.min(d - r)), float(np.max(d + r))


def bisect_eigenvalues(diag, off, indices) -> np.ndarray:
    """Eigenvalues with the given 0-based indices, by Sturm-count bisection."""
    d = np.asarray(diag, dtype=float)
    e = np.asarray(off, dtype=float)
    idx = np.asarray(indices, dtype=int)
    lo_b, hi_b = _gershgorin(d, e)
    span = hi_b - lo_b
    lo = np.full(idx.shape, lo_b - 1e-12 * abs(span))
    hi = np.full(idx.shape, hi_b + 1e-12 * abs(span))
    for _ in range(BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        below = sturm_count(d, e, mid) > idx
        hi = np.where(below, mid, hi)
        lo = np.where(below, lo, mid)
        if np.all(hi - lo <= 4 * np.finfo(float).eps * np.maximum(1.0, np.abs(mid))):
            break
    return 0.5 * (lo + hi)


def inverse_iteration(diag, off, value: float, steps: int = INVERSE_ITERATION_STEPS) -> np.ndarray:
    """Unit eigenvector of the tridiagonal matrix for an accurate eigenvalue."""
    d = np.asarray(diag, dtype=float)
    e = np.asarray(off, dtype=float)
    n = d.size
    shift = value + 1e-13 * max(1.0, abs(value))
    ab = np.zeros((3, n))
    ab[0, 1:] = e
    ab[1] = d - shift
    ab[2, :-1] = e
    rng = np.random.default_rng(12345)
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    for _ in range(steps):
        w = linalg.solve_banded((1, 1), ab, v)
        w /= np.linalg.norm(w)
        if abs(abs(w @ v) - 1.0) < 1e-14:
            v = w
            break
        v = w
    return v


def tridiagonal_eigh(diag, off, count: int, method: str = "lapack"):
    """Lowest ``count`` eigenpairs of a symmetric tridiagonal matrix.

    ``method="bisection"`` runs the pure numpy Sturm bisection plus inverse
    iteration; ``"lapack"`` hands the same algorithm (stebz/stein) to LAPACK.
    """
    d = np.asarray(diag, dtype=float)
    e = np.asarray(off, dtype=float)
    if method == "lapack":
        w, v = linalg.eigh_tridiagonal(
            d, e, select="i", select_range=(0, count - 1), lapack_driver="stebz"
        )
        return w, v.T
    if method == "bisection":
        w = bisect_eigenvalues(d, e, np.arange(count))
        v = np.array([inverse_iteration(d, e, lam) for lam in w])
        return w, v
    raise ValueError(f"unknown method {method!r}")


def _tridiag_apply(d, e, v):
    out = d * v
    out[:-1] += e * v[1:]
    out[1:] += e * v[:-1]
    return out


def _orient(v: np.ndarray) -> np.ndarray:
    # first non-negligible lobe positive, so sign is reproducible
    k = np.argmax(np.abs(v) > 1e-3 * np.max(np.abs(v)))
    return v if v[k] >= 0 else -v


def _finish(d, e, w, vecs, grid, x, scale, weights_sqrt=None):
    residuals = np.array([np.linalg.norm(_tridiag_apply(d, e, v) - lam * v) for lam, v in zip(w, vecs)])
    if np.any(np.diff(w) <= 0):
        raise ConvergenceError("eigenvalues are not strictly increasing (degenerate or unresolved)")
    counts = sturm_count(d, e, w[-1] + 1e-9 * max(1.0, abs(w[-1])))
    vecs = np.array([_orient(v) for v in vecs]) / math.sqrt(scale)
    if weights_sqrt is not None:
        vecs = vecs / weights_sqrt
    return NumericSpectrum(w, vecs, grid, x, residuals, counts)


def radial_solve(
    potential: Callable[[np.ndarray], np.ndarray],
    grid: Grid,
    count: int,
    mu: float = 1.0,
    hbar: float = 1.0,
    method: str = "lapack",
    check_refinement: bool = False,
    tol: float = 1e-6,
) -> NumericSpectrum:
    """Lowest eigenpairs of -(hbar^2/2mu) g'' + V(x) g with g = 0 at both ends.

    Standard 3-point Laplacian on the interior of ``grid``. Eigenvectors are
    normalised to unit integral of g^2 (trapezoid, zero boundary values).
    """
    x = grid.interior
    h = grid.spacing
    kin = hbar**2 / (2 * mu * h * h)
    v = np.asarray(potential(x), dtype=float)
    if not np.all(np.isfinite(v)):
        raise ValueError("potential must be finite on interior grid points")
    d = 2 * kin + v
    e = np.full(x.size - 1, -kin)
    w, vecs = tridiagonal_eigh(d, e, count, method)
    spec = _finish(d, e, w, vecs, grid, x, h)
    if check_refinement:
        fine = radial_solve(potential, grid.refined(), count, mu, hbar, method)
        shift = np.max(np.abs(fine.eigenvalues - w))
        if shift > 10 * tol * max(1.0, np.max(np.abs(w))):
            warnings.warn(f"grid too coarse: halving spacing shifts an eigenvalue by {shift:.3g}", GridWarning)
    return spec


def angular_solve(ring, D: int, Lam: float, n_cells: int, count: int, method: str = "lapack") -> NumericSpectrum:
    """Eigenvalues L = l(l + D - 2) of the polar-most angular equation.

    Finite-volume discretisation of the Sturm-Liouville form
    -(w H')'/w + [Lam - U(theta)] H / sin^2 = L H, w = sin^(D-2), on cell
    centres of (0, pi); the similarity transform u = sqrt(w) H makes the
    matrix symmetric tridiagonal. ``ring`` supplies gamma_p, zeta_p, kappa_p.
    Eigenvectors are H sampled at the cell centres, normalised against the
    weight sin^(D-2).
    """
    if D < 3:
        raise ValueError("the polar ring sector needs D >= 3")
    h = math.pi / n_cells
    theta = (np.arange(n_cells) + 0.5) * h
    faces = np.arange(n_cells + 1) * h
    p = D - 2
    w_c = np.sin(theta) ** p
    w_f = np.abs(np.sin(faces)) ** p
    w_f[0] = w_f[-1] = 0.0
    s2 = np.sin(theta) ** 2
    c = np.cos(theta)
    pot = (Lam - (ring.gamma_p * c * c + ring.zeta_p * c + ring.kappa_p)) / s2
    d = (w_f[:-1] + w_f[1:]) / (h * h * w_c) + pot
    e = -w_f[1:-1] / (h * h * np.sqrt(w_c[:-1] * w_c[1:]))
    vals, vecs = tridiagonal_eigh(d, e, count, method)
    grid = Grid(0.0, math.pi, n_cells + 1)
    return _finish(d, e, vals, vecs, grid, theta, h, np.sqrt(w_c))


def richardson(coarse, fine, order: int = 2):
    """Extrapolate two estimates whose error scales as h^order (fine has h/2)."""
    f = 2**order
    return (f * np.asarray(fine) - np.asarray(coarse)) / (f - 1)


def refinement_ratio(values_h, values_h2, values_h4) -> np.ndarray:
    """(E_h - E_h/2) / (E_h/2 - E_h/4); about 4 for a second-order scheme."""
    a = np.asarray(values_h) - np.asarray(values_h2)
    b = np.asarray(values_h2) - np.asarray(values_h4)
    return a / b


# --- quadrature -------------------------------------------------------------

@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error: float
    converged: bool

    def __float__(self):
        return self.value


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(10)


def _composite_gl(f, a, b, panels):
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mids = 0.5 * (edges[:-1] + edges[1:])
    x = (mids[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    fx = np.asarray(f(x), dtype=float).reshape(panels, -1)
    return float(np.sum(half * (fx @ _GL_WEIGHTS)))


def quadrature(
    f: Callable,
    a: float,
    b: float,
    n: int = 64,
    *,
    endpoint_powers: tuple[float, float] | None = None,
    rtol: float = 1e-12,
    atol: float = 1e-14,
    max_doublings: int = 10,
) -> QuadratureResult:
    """Integral of ``f`` over (a, b).

    Composite 10-point Gauss-Legendre (an open rule, endpoints never
    sampled) on ``n`` panels, doubled until two successive estimates agree.
    When ``endpoint_powers=(pa, pb)`` is given the integrand is
    f(x) (x-a)^pa (b-x)^pb and the algebraic weight is handled exactly by
    QUADPACK's QAWS rule.
    """
    if endpoint_powers is not None:
        pa, pb = endpoint_powers
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, err = integrate.quad(
                f, a, b, weight="alg", wvar=(pa, pb), epsabs=atol, epsrel=rtol, limit=500
            )
        # QUADPACK warns when roundoff stops it short of rtol; judge by its error estimate
        return QuadratureResult(val, err, err < 1e-8 * max(1.0, abs(val)))
    prev = _composite_gl(f, a, b, n)
    panels = n
    for _ in range(max_doublings):
        panels *= 2
        cur = _composite_gl(f, a, b, panels)
        err = abs(cur - prev)
        if err <= max(atol, rtol * abs(cur)):
            return QuadratureResult(cur, err, True)
        prev = cur
    return QuadratureResult(prev, err, False)


def trapezoid_weights(x: np.ndarray) -> np.ndarray:
    """Trapezoid weights for samples on a (possibly nonuniform) 1-D grid."""
    x = np.asarray(x, dtype=float)
    w = np.zeros_like(x)
    dx = np.diff(x)
    w[:-1] += dx / 2
    w[1:] += dx / 2
    return w


# --- centrifugal approximation audit ---------------------------------------

def pekeris_relative_error(x):
    """|rhs(x) - 1/x^2| * x^2 for the tanh-based stand-in of 1/x^2."""
    x = np.asarray(x, dtype=float)
    t = np.tanh(x)
    scaled = (x / t) ** 2 - x * x * (2.0 / 3.0 + t * t / 3.0)
    return np.abs(scaled - 1.0)


@dataclass
class PekerisScan:
    x: np.ndarray
    rel_error: np.ndarray
    max_error: float
    crossings: dict[float, float | None]
    monotone: bool


def pekeris_error_scan(lambda_r_max: float = 2.0, samples: int = 2001,
                       thresholds=(0.01, 0.05, 0.10)) -> PekerisScan:
    """Relative error of the centrifugal stand-in over (0, lambda_r_max].

    Reports the curve, its maximum, the first crossing of each threshold
    (refined by root finding, None when never crossed) and whether the
    sampled error is nondecreasing.
    """
    if samples < 2:
        raise ValueError("need at least 2 samples")
    x = np.linspace(lambda_r_max / samples, lambda_r_max, samples)
    err = pekeris_relative_error(x)
    crossings: dict[float, float | None] = {}
    for thr in thresholds:
        above = np.nonzero(err >= thr)[0]
        if above.size == 0:
            crossings[thr] = None
            continue
        i = above[0]
        if i == 0:
            crossings[thr] = float(x[0])
            continue
        crossings[thr] = float(optimize.brentq(lambda s: float(pekeris_relative_error(s)) - thr, x[i - 1], x[i], xtol=1e-14))
    return PekerisScan(x, err, float(err.max()), crossings, bool(np.all(np.diff(err) >= 0)))
