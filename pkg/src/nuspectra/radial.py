"""Radial sector: centrifugal approximation, reduced parameters, NU constants,
closed-form spectrum, wavefunctions, normalisation and Gram-Schmidt.

Two formula sets are carried side by side, selected by ``form``:

``"corrected"`` (default)
    The NU reduction carried through with the linear coefficient of the
    pi(s) radicand taken as 16k - 2 - 16E~ and the k root obeying the
    unsquared eigenvalue condition 4k - (2n+1)^2 = (2n+1) sqrt(c2). These
    are the formulas whose energies and wavefunctions solve the radial
    equation; the finite-difference oracle confirms them.

``"printed"``
    The expressions exactly as they appear in the source derivation
    (c1 = 16k - 8 - 16E~, the k <= 0 root, the (-) branch, 2 c6 = 8 + sqrt(c2),
    wavefunction exponents tanh^(a+1/2) sech^b). Kept for auditing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import oracle
from .geometry import centrifugal_gamma
from .specfun import DomainError, PoleError, gamma_ratio, gen_binomial, hyp3f2_terminating, jacobi_eval, jacobi_moment

FORMS = ("corrected", "printed")
CONSTRAINT_RTOL = 1e-9
B_TILDE_PRINTED_THRESHOLD = 35 / 16


class ConstraintError(ArithmeticError):
    """The perfect-square condition c1^2 = c2 c3 is violated."""


class InadmissibleStateError(ValueError):
    """Requested (n, l, D) is not a bound state; message names the failed constraint."""


@dataclass(frozen=True)
class PotentialParams:
    """Physical inputs of V = A tanh^2 + B coth^2 + ring term / r^2."""

    A: float
    B: float
    lam: float
    gamma: float = 0.0
    zeta: float = 0.0
    kappa: float = 0.0
    mu: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError("screening parameter lambda must be positive")
        if not self.mu > 0 or not self.hbar > 0:
            raise ValueError("mu and hbar must be positive")

    @property
    def energy_scale(self) -> float:
        """hbar^2 lambda^2 / (2 mu)."""
        return self.hbar**2 * self.lam**2 / (2 * self.mu)


@dataclass(frozen=True)
class ReducedRadialParams:
    A_t: float
    B_t: float
    E_t: float
    gamma_D: float


@dataclass(frozen=True)
class NUConstants:
    c1: float
    c2: float
    c3: float
    c4: float
    c5: float
    c6: float
    c7: float
    k: float
    n: int
    form: str = "corrected"

    @property
    def jacobi_a(self) -> float:
        return -self.c6 - self.c7

    @property
    def jacobi_b(self) -> float:
        return -self.c7


@dataclass(frozen=True)
class RadialEigenstate:
    n: int
    l: float
    D: int
    energy: float
    energy_reduced: float
    jacobi_a: float
    jacobi_b: float
    omega: float
    lam: float
    constants: NUConstants
    form: str = "corrected"
    normalization: str = "closed"

    @property
    def tanh_power(self) -> float:
        if self.form == "corrected":
            return self.jacobi_b + 0.5
        return self.jacobi_a + 0.5

    @property
    def sech_power(self) -> float:
        if self.form == "corrected":
            return self.jacobi_a
        return self.jacobi_b


@dataclass
class BoundWindow:
    """The printed bound-state conditions, each reported on its own, plus the
    index-admissibility ground truth."""

    A_t: float
    B_t: float
    a_threshold: float
    b_threshold: float
    a_condition: bool
    b_condition: bool
    b_tilde_condition: bool
    inconsistent: bool
    n_max: int
    diagnostics: list[str] = field(default_factory=list)

    @property
    def has_bound_state(self) -> bool:
        return self.n_max >= 0

    def failed(self) -> list[str]:
        names = []
        if not self.a_condition:
            names.append("A-condition")
        if not self.b_condition:
            names.append("B-condition")
        if not self.b_tilde_condition:
            names.append("Btilde>35/16")
        return names


def _check_form(form):
    if form not in FORMS:
        raise ValueError(f"form must be one of {FORMS}, got {form!r}")


def pekeris_rhs(x):
    """-2/3 - tanh^2(x)/3 + 1/tanh^2(x), the stand-in for 1/x^2."""
    t = np.tanh(np.asarray(x, dtype=float))
    out = -2.0 / 3.0 - t * t / 3.0 + 1.0 / (t * t)
    return float(out) if np.ndim(x) == 0 else out


def reduce(params: PotentialParams, D: int, l: float, E: float | None = None) -> ReducedRadialParams:
    """Dimensionless A~, B~, E~ of the approximated radial equation."""
    g = centrifugal_gamma(D, l)
    s4 = 4 * params.energy_scale
    E_t = math.nan if E is None else E / s4 + g / 6
    return ReducedRadialParams(params.A / s4 - g / 12, params.B / s4 + g / 4, E_t, g)


def unreduce(red: ReducedRadialParams, params: PotentialParams) -> tuple[float, float, float]:
    """Inverse of :func:`reduce`: back to (A, B, E)."""
    s4 = 4 * params.energy_scale
    g = red.gamma_D
    return (red.A_t + g / 12) * s4, (red.B_t - g / 4) * s4, (red.E_t - g / 6) * s4


def _sqrt_checked(value: float, what: str) -> float:
    if value < 0:
        raise DomainError(f"negative radicand in {what}: {value}")
    return math.sqrt(value)


def nu_k_roots(n: int, A_t: float) -> tuple[float, float]:
    """Both roots of 4k = -(2n+1)^2 +/- (2n+1) sqrt(1 + 16 A~), (+) first."""
    q = 2 * n + 1
    S = _sqrt_checked(1 + 16 * A_t, "1 + 16 A~")
    return (-q * q + q * S) / 4, (-q * q - q * S) / 4


def select_k(n: int, A_t: float, B_t: float = 0.0, form: str = "corrected") -> tuple[float, str]:
    """Pick the admissible root of the k quadratic and explain the choice."""
    _check_form(form)
    k_plus, k_minus = nu_k_roots(n, A_t)
    if form == "corrected":
        q = 2 * n + 1
        S = math.sqrt(1 + 16 * A_t)
        note = "(+) root: 4k - q^2 = q sqrt(c2) with sqrt(c2) = sqrt(1+16A~) - 2q"
        if S < 2 * q:
            note += "; sqrt(1+16A~) < 2(2n+1) so no normalisable state"
        return k_plus, note
    candidates = [k for k in (k_minus, k_plus) if k <= 0]
    if len(candidates) == 1:
        return candidates[0], "unique k <= 0 root"
    admissible = []
    for k in candidates:
        E_t = energy_reduced(n, A_t, B_t, form="printed")
        try:
            c = _constants_from(n, k, A_t, B_t, E_t, "printed")
        except (DomainError, ZeroDivisionError):
            continue
        if c.jacobi_a > -1 and c.jacobi_b > -1:
            admissible.append(k)
    if len(admissible) == 1:
        return admissible[0], "both roots k <= 0; only one gives admissible Jacobi indices"
    note = "both roots k <= 0; tie, taking the (-) root" if not admissible else "both roots admissible; taking the (-) root"
    return k_minus, note


def energy_reduced(n: int, A_t: float, B_t: float, form: str = "corrected") -> float:
    """Reduced energy E~ of the n-th level."""
    _check_form(form)
    q = 2 * n + 1
    S = _sqrt_checked(1 + 16 * A_t, "1 + 16 A~")
    T = _sqrt_checked(1 + 16 * B_t, "1 + 16 B~")
    if form == "corrected":
        return -q * q / 4 + q * S / 4 - 1 / 8 + T * (S - 2 * q) / 8
    rad = (1 + 16 * B_t) * (1 + 16 * A_t + 4 * q * q + 4 * q * S)
    return -q * q / 4 - q * S / 4 - 1 / 2 - math.sqrt(rad) / 8


def energy_physical(n: int, l: float, D: int, params: PotentialParams, form: str = "corrected") -> float:
    """Bound-state energy E_nl in D dimensions."""
    red = reduce(params, D, l)
    E_t = energy_reduced(n, red.A_t, red.B_t, form)
    return unreduce(ReducedRadialParams(red.A_t, red.B_t, E_t, red.gamma_D), params)[2]


def energy_printed_literal(n: int, l: float, D: int, params: PotentialParams) -> float:
    """Direct transcription of the published D-dimensional spectrum, (-) branch."""
    mu, hb, lam, A, B = params.mu, params.hbar, params.lam, params.A, params.B
    g = centrifugal_gamma(D, l)
    q = 2 * n + 1
    ra = 1 + 8 * mu / (lam**2 * hb**2) * (A - g * hb**2 * lam**2 / (6 * mu))
    rb = 1 + 8 * mu / (lam**2 * hb**2) * (B + g * hb**2 * lam**2 / (2 * mu))
    sa = _sqrt_checked(ra, "A radicand")
    rhs = (-2 * g * lam**2 / 3 - lam**2 * q * q - lam**2 * q * sa - 2 * lam**2
           - lam**2 / 2 * math.sqrt(rb) * _sqrt_checked(ra + 4 * q * q + 4 * q * sa, "outer radicand"))
    return rhs * hb**2 / (2 * mu)


def _constants_from(n, k, A_t, B_t, E_t, form) -> NUConstants:
    lin = 2.0 if form == "corrected" else 8.0
    c1 = 16 * k - lin - 16 * E_t
    c2 = 1 + 16 * A_t - 16 * k
    c3 = 4 * (1 + 16 * B_t)
    if c2 <= 0:
        raise DomainError(f"c2 = {c2} must be positive")
    r2 = math.sqrt(c2)
    c4 = (1 + r2) / 4
    c5 = (2 - c1 / r2) / 8
    c7 = c1 / (4 * r2)
    if form == "corrected":
        c6 = -(r2 + c1 / r2) / 2
    else:
        c6 = (8 + r2) / 2
    return NUConstants(c1, c2, c3, c4, c5, c6, c7, k, n, form)


def nu_constants(n: int, red: ReducedRadialParams, form: str = "corrected", k: float | None = None) -> NUConstants:
    """The seven NU constants for level ``n``; ``red.E_t`` must be that level's E~."""
    _check_form(form)
    if k is None:
        k, _ = select_k(n, red.A_t, red.B_t, form)
    c = _constants_from(n, k, red.A_t, red.B_t, red.E_t, form)
    if abs(c.c1**2 - c.c2 * c.c3) > CONSTRAINT_RTOL * max(1.0, c.c1**2):
        raise ConstraintError(f"c1^2 - c2 c3 = {c.c1**2 - c.c2 * c.c3:.3e}")
    return c


def nu_constraint_residual(n: int, A_t: float, B_t: float, form: str = "corrected") -> float:
    """Relative residual of [lin + 16E~ - 16k]^2 = 4(1+16B~)(1+16A~-16k)."""
    k, _ = select_k(n, A_t, B_t, form)
    E_t = energy_reduced(n, A_t, B_t, form)
    lin = 2.0 if form == "corrected" else 8.0
    lhs = (lin + 16 * E_t - 16 * k) ** 2
    rhs = 4 * (1 + 16 * B_t) * (1 + 16 * A_t - 16 * k)
    return (lhs - rhs) / max(1.0, abs(rhs))


def max_radial_n(params: PotentialParams, D: int, l: float) -> int:
    """Largest n with a normalisable state (-1 when there is none)."""
    red = reduce(params, D, l)
    if 1 + 16 * red.A_t < 0 or 1 + 16 * red.B_t < 0:
        return -1
    S = math.sqrt(1 + 16 * red.A_t)
    T = math.sqrt(1 + 16 * red.B_t)
    # decay exponent (S - T - 2 - 4n)/2 must be positive
    bound = (S - T - 2) / 4
    n = math.ceil(bound) - 1
    return max(n, -1)


def bound_state_window(params: PotentialParams, D: int, l: float) -> BoundWindow:
    """Evaluate every printed bound-state condition separately."""
    g = centrifugal_gamma(D, l)
    red = reduce(params, D, l)
    scale = params.energy_scale
    a_thr = scale * (g / 3 - 1 / 4)
    b_thr = -scale * (g + 1 / 4)
    a_ok = params.A >= a_thr
    b_ok = params.B >= b_thr
    bt_ok = red.B_t > B_TILDE_PRINTED_THRESHOLD
    diags = []
    inconsistent = b_ok and not bt_ok
    if inconsistent:
        diags.append(f"B >= {b_thr:.6g} holds but B~ = {red.B_t:.6g} <= 35/16")
    n_max = max_radial_n(params, D, l)
    if n_max < 0:
        diags.append("no level has positive decay exponent (no bound state)")
    return BoundWindow(red.A_t, red.B_t, a_thr, b_thr, a_ok, b_ok, bt_ok, inconsistent, n_max, diags)


def radial_eigenstate(
    n: int,
    l: float,
    D: int,
    params: PotentialParams,
    form: str = "corrected",
    normalization: str = "closed",
) -> RadialEigenstate:
    """Build the n-th bound state, or raise InadmissibleStateError.

    ``normalization`` picks how Omega_n is found: "closed" (gamma-function
    closed form), "sum" (binomial-3F2 sum) or "quadrature".
    """
    _check_form(form)
    red0 = reduce(params, D, l)
    E_t = energy_reduced(n, red0.A_t, red0.B_t, form)
    red = ReducedRadialParams(red0.A_t, red0.B_t, E_t, red0.gamma_D)
    try:
        c = nu_constants(n, red, form)
    except DomainError as exc:
        raise InadmissibleStateError(f"n={n}: {exc}") from exc
    a, b = c.jacobi_a, c.jacobi_b
    failed = []
    if not a > -1:
        failed.append(f"-c6-c7 > -1 (a={a:.6g})")
    if not b > -1:
        failed.append(f"-c7 > -1 (b={b:.6g})")
    decay = a if form == "corrected" else b
    if not decay > 0:
        failed.append(f"sech exponent > 0 for normalisability (got {decay:.6g})")
    if failed:
        raise InadmissibleStateError(f"n={n}, l={l}, D={D}: violated " + "; ".join(failed))
    energy = unreduce(red, params)[2]
    if normalization == "quadrature":
        lam_n = quadrature_norm(n, a, b, params.lam, form)
    elif normalization == "sum":
        lam_n = normalization_sum(n, a, b, params.lam, form)
    elif normalization == "closed":
        if form != "corrected":
            raise ValueError("the closed-form norm assumes the corrected exponent layout")
        lam_n = closed_form_norm(n, a, b, params.lam)
    else:
        raise ValueError(f"unknown normalization {normalization!r}")
    if not lam_n > 0:
        raise InadmissibleStateError(f"normalisation integral {lam_n} is not positive")
    return RadialEigenstate(n, l, D, energy, E_t, a, b, 1 / math.sqrt(lam_n), params.lam, c, form, normalization)


def _unnormalized(n, a, b, lam, r, form):
    x = lam * np.asarray(r, dtype=float)
    t = np.tanh(x)
    sech = 1.0 / np.cosh(x)
    if form == "corrected":
        tp, sp = b + 0.5, a
    else:
        tp, sp = a + 0.5, b
    return t**tp * sech**sp * jacobi_eval(n, a, b, 2 * t * t - 1)


def radial_wavefunction(state: RadialEigenstate, r, normalized: bool = True):
    """g_n(r) = Omega (tanh lam r)^p (sech lam r)^s P_n^(a,b)(2 tanh^2 lam r - 1).

    For the corrected form p = b + 1/2 and s = a; the printed form swaps them.
    """
    g = _unnormalized(state.n, state.jacobi_a, state.jacobi_b, state.lam, r, state.form)
    if normalized:
        g = state.omega * g
    return float(g) if np.ndim(r) == 0 else g


def default_rmax(lam: float, sech_power: float, factor: float = 20.0) -> float:
    """Cut-off radius: ``factor``/lambda, stretched so that sech^(2 s) < e^-2factor."""
    if sech_power <= 0:
        raise DomainError("wavefunction does not decay")
    return max(factor, factor / sech_power) / lam


def quadrature_norm(n: int, a: float, b: float, lam: float, form: str = "corrected") -> float:
    """Integral over r of the unnormalised g_n^2, by composite Gauss-Legendre."""
    sech_power = a if form == "corrected" else b
    rmax = default_rmax(lam, sech_power)
    res = oracle.quadrature(lambda r: _unnormalized(n, a, b, lam, r, form) ** 2, 0.0, rmax, n=64, rtol=1e-13)
    return res.value


def closed_form_norm(n: int, a: float, b: float, lam: float) -> float:
    """Integral over r of the unnormalised g_n^2 without cancellation.

    Gamma(n+a+1) Gamma(n+b+1) / (2 lam a n! Gamma(n+a+b+1)); it follows from
    the Jacobi self-overlap with the (1-y) exponent lowered by one.
    """
    if not a > 0:
        raise DomainError(f"needs a > 0 (got {a})")
    return gamma_ratio([n + a + 1, n + b + 1], [n + a + b + 1, n + 1]) / (2 * lam * a)


def normalization_sum(n: int, a: float, b: float, lam: float, form: str = "corrected") -> float:
    """Closed-form integral of the unnormalised g_n^2 (Omega_n = 1/sqrt of it).

    One Jacobi factor is expanded as a binomial sum and each term is
    integrated against the other with the 3F2 moment formula. The terms
    alternate in sign, so precision drops for large n and large a, b;
    :func:`closed_form_norm` is the stable route.

    corrected: with y = 2 tanh^2 - 1 and dr = dy / (sqrt2 lam sqrt(1+y)(1-y)),
        2^-(a+b+1)/lam * 2^-n sum_m C(n+a,m) C(n+b,n-m) (-1)^(n-m)
            * M(c = a-1+n-m, d = b+m)
    printed: the published double sum, evaluated term by term; raises
        PoleError when a gamma argument is a nonpositive integer.
    """
    _check_form(form)
    total = 0.0
    if form == "corrected":
        for m in range(n + 1):
            coef = gen_binomial(n + a, m) * gen_binomial(n + b, n - m) * (-1) ** (n - m)
            total += coef * jacobi_moment(n, a, b, a - 1 + n - m, b + m)
        return total * 2.0 ** (-(a + b + 1) - n) / lam
    for m in range(n + 1):
        coef = gen_binomial(n + a, m) * gen_binomial(n + b, n - m)
        e = 2 * a + 2 * m - n + b
        gam = gamma_ratio([2 * a + m - n, b + m + 1, n + a + 1], [n + 1, e + 1, a + 1])
        f = hyp3f2_terminating(n, n + a + b + 1, 2 * a + m - n, a + 1, e + 1)
        total += coef * 2.0**e * gam * f
    return total / (lam * 2.0 ** (n + 0.5))


def gram_matrix(functions, weights) -> np.ndarray:
    F = np.atleast_2d(np.asarray(functions, dtype=float))
    return (F * weights) @ F.T


def gram_schmidt(functions, weights, rank_tol: float = 1e-12) -> np.ndarray:
    """Orthonormalise sampled functions under <f, g> = sum_i w_i f_i g_i.

    Modified Gram-Schmidt with one re-orthogonalisation pass. Output i is a
    combination of inputs 0..i. Raises ValueError on numerical dependence.
    """
    F = np.atleast_2d(np.asarray(functions, dtype=float))
    w = np.asarray(weights, dtype=float)
    out = []
    for i, f in enumerate(F):
        v = f.copy()
        orig = math.sqrt(max(float(np.sum(w * f * f)), 0.0))
        for _ in range(2):
            for q in out:
                v -= np.sum(w * q * v) * q
        nv = math.sqrt(max(float(np.sum(w * v * v)), 0.0))
        if orig == 0.0 or nv < rank_tol * orig:
            raise ValueError(f"input {i} is numerically dependent on the previous ones")
        out.append(v / nv)
    return np.array(out)


def limiting_case_map(omega: float, alpha: float, lam: float, m: float = 1.0, hbar: float = 1.0) -> tuple[float, float, float]:
    """(A, B, energy shift) turning the tanh potential into the oscillator
    (1/2) m w^2 r^2 + hbar^2 alpha / (2 m r^2) as lam -> 0.

    E(tanh potential) - shift approximates E(oscillator).
    """
    if not lam > 0:
        raise ValueError("lambda must be positive")
    A = m * omega**2 / (2 * lam**2) - hbar**2 * alpha * lam**2 / (30 * m)
    B = hbar**2 * alpha * lam**2 / (2 * m)
    return A, B, 2 * B / 3


def exact_potential(params: PotentialParams, D: int, l: float):
    """V_eff(r) of the radial equation with the true centrifugal term."""
    g = centrifugal_gamma(D, l)
    c = g * params.hbar**2 / (2 * params.mu)

    def V(r):
        t2 = np.tanh(params.lam * r) ** 2
        return params.A * t2 + params.B / t2 + c / (r * r)

    return V


def approximated_potential(params: PotentialParams, D: int, l: float):
    """V_eff(r) with 1/r^2 replaced by lambda^2 times the tanh stand-in."""
    g = centrifugal_gamma(D, l)
    c = g * params.hbar**2 / (2 * params.mu)

    def V(r):
        x = params.lam * r
        t2 = np.tanh(x) ** 2
        return params.A * t2 + params.B / t2 + c * params.lam**2 * pekeris_rhs(x)

    return V


def oscillator_potential(omega: float, alpha: float, m: float = 1.0, hbar: float = 1.0, D: int = 3, l: float = 0):
    """V_eff(r) of the limiting oscillator plus its inverse-square term."""
    g = centrifugal_gamma(D, l)

    def V(r):
        return 0.5 * m * omega**2 * r * r + (hbar**2 * alpha / (2 * m) + g * hbar**2 / (2 * m)) / (r * r)

    return V


def oscillator_energy(n: int, omega: float, alpha: float, m: float = 1.0, hbar: float = 1.0, D: int = 3, l: float = 0) -> float:
    """Exact levels of the limiting oscillator.

    With the total inverse-square strength c = alpha + gamma_D (units of
    hbar^2/2m) and g ~ r^s, s(s-1) = c, the levels are hbar w (2n + s + 1/2).
    """
    g = centrifugal_gamma(D, l)
    c = alpha + g
    s = 0.5 + math.sqrt(0.25 + c)
    return hbar * omega * (2 * n + s + 0.5)


__all__ = [
    "PotentialParams", "ReducedRadialParams", "NUConstants", "RadialEigenstate", "BoundWindow",
    "ConstraintError", "InadmissibleStateError", "PoleError",
    "pekeris_rhs", "reduce", "unreduce", "nu_k_roots", "select_k", "energy_reduced", "energy_physical",
    "energy_printed_literal", "nu_constants", "nu_constraint_residual", "max_radial_n", "bound_state_window",
    "radial_eigenstate", "radial_wavefunction", "quadrature_norm", "normalization_sum", "closed_form_norm",
    "gram_matrix", "gram_schmidt", "limiting_case_map", "exact_potential", "approximated_potential",
    "oscillator_potential", "oscillator_energy",
]
