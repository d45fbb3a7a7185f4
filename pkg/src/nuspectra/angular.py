"""Angular sector: intermediate hyperspherical angles and the polar-most angle
carrying the ring-shaped term, plus the four special parameter patterns."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .specfun import DomainError, jacobi_derivative, jacobi_eval, jacobi_norm

ROOT_MATCH_TOL = 1e-8
PHI_FORMS = ("minus", "plus")


class NonNormalizableError(ValueError):
    pass


class PatternError(ValueError):
    """Ring parameters do not fit the requested special case."""


@dataclass(frozen=True)
class RingParams:
    """Dimensionless ring strengths entering U(y) = (g y^2 + z y + k)/(1 - y^2)."""

    gamma_p: float = 0.0
    zeta_p: float = 0.0
    kappa_p: float = 0.0

    @classmethod
    def from_physical(cls, gamma: float, zeta: float, kappa: float, mu: float = 1.0, hbar: float = 1.0) -> "RingParams":
        # U enters the angular equation with a plus sign, the potential with a minus
        f = -2 * mu / hbar**2
        return cls(f * gamma, f * zeta, f * kappa)

    def is_zero(self) -> bool:
        return self.gamma_p == 0 and self.zeta_p == 0 and self.kappa_p == 0


@dataclass(frozen=True)
class AngularSolution:
    eta0: float
    eta1: float
    eta2: float
    u0: float
    u1: float
    u2: float
    k: float
    n: int
    D: int
    l: float
    Lam: float
    ring: RingParams
    phi_form: str = "minus"

    @property
    def jacobi_alpha(self) -> float:
        return self.u0 - self.u2

    @property
    def jacobi_beta(self) -> float:
        return self.u0 + self.u2

    @property
    def L(self) -> float:
        return self.l * (self.l + self.D - 2)

    def fields(self) -> dict[str, float]:
        return {
            "eta0": self.eta0, "eta1": self.eta1, "eta2": self.eta2,
            "u0": self.u0, "u1": self.u1, "u2": self.u2, "k": self.k,
            "jacobi_alpha": self.jacobi_alpha, "jacobi_beta": self.jacobi_beta,
        }


def intermediate_angular(j: int, l_j: int, l_jm1: int, theta, normalized: bool = False):
    """H(theta_j) = (sin theta)^l_{j-1} P_n^(c,c)(cos theta), c = l_{j-1} + (j-2)/2,
    n = l_j - l_{j-1}. Normalised against sin^(j-1) when asked."""
    if l_j < l_jm1:
        raise ValueError(f"need l_j >= l_(j-1), got {l_j} < {l_jm1}")
    if j < 2:
        raise ValueError("intermediate angles start at j = 2")
    n = l_j - l_jm1
    c = l_jm1 + (j - 2) / 2
    th = np.asarray(theta, dtype=float)
    H = np.sin(th) ** l_jm1 * jacobi_eval(n, c, c, np.cos(th))
    if normalized:
        H = H / math.sqrt(jacobi_norm(n, c, c))
    return float(H) if np.ndim(theta) == 0 else H


def eta_params(ring: RingParams, D: int, l: float, Lam: float) -> tuple[float, float, float]:
    """(eta0, eta1, eta2), the coefficients of sigma~(y) = eta2 y^2 + eta1 y + eta0."""
    L = l * (l + D - 2)
    return ring.kappa_p + L - Lam, ring.zeta_p, ring.gamma_p - L


def u_params(etas, k: float, D: int) -> tuple[float, float, float]:
    """(u0, u1, u2) with u0 the nonnegative root of ((D-3)/2)^2 - eta2 - k."""
    eta0, eta1, eta2 = etas
    rad = ((D - 3) / 2) ** 2 - eta2 - k
    if rad < 0:
        if rad > -1e-12 * max(1.0, abs(k)):
            rad = 0.0
        else:
            raise DomainError(f"u0^2 = {rad} is negative")
    u0 = math.sqrt(rad)
    if u0 == 0:
        if eta1 != 0:
            raise ZeroDivisionError("u2 = eta1/(2 u0) with u0 = 0 and eta1 != 0")
        u2 = 0.0
    else:
        u2 = eta1 / (2 * u0)
    return u0, (D - 3 - 2 * u0) / 2, u2


def k_quadratic_roots(n: int, D: int, eta2: float) -> tuple[float, float]:
    """Roots of [k - n^2 - n + (D-3)/2]^2 = (2n+1)^2 [((D-3)/2)^2 - eta2 - k], (+) first."""
    disc = (D - 2) ** 2 - 4 * eta2
    if disc < 0:
        raise DomainError(f"negative discriminant {disc}")
    s = (1 + 2 * n) * math.sqrt(disc)
    base = 2 - D - 2 * n - 2 * n * n
    return (base + s) / 2, (base - s) / 2


def k_constraint_roots(etas, D: int) -> tuple[float, float]:
    """Roots of 4k - 4 eta0 = eta1^2 / u0^2 with u0^2 = ((D-3)/2)^2 - eta2 - k."""
    eta0, eta1, eta2 = etas
    X = (D - 3) ** 2 + 4 * eta0 - 4 * eta2
    rad = X * X - 16 * (eta1 * eta1 + eta0 * ((D - 3) ** 2 - 4 * eta2))
    if rad < 0:
        raise DomainError(f"negative radicand {rad}")
    s = math.sqrt(rad)
    return (X + s) / 8, (X - s) / 8


def constraint_residual(sol: AngularSolution) -> float:
    """4k - 4 eta0 - eta1^2/u0^2, scaled by max(1, |4k|)."""
    if sol.u0 == 0:
        extra = 0.0 if sol.eta1 == 0 else math.inf
    else:
        extra = sol.eta1**2 / sol.u0**2
    return (4 * sol.k - 4 * sol.eta0 - extra) / max(1.0, abs(4 * sol.k))


def consistency_residuals(n: int, D: int, etas) -> tuple[float, float]:
    """Signed residuals of the two published quantisation conditions.

    res_linear    = (2n+1)^2 + ((D-1)^2 + 4 eta0 - 4 eta2 - 2)/2
    res_quadratic = (2n+1)^2 ((D-2)^2 - 4 eta2)
                    - [((D-3)^2 + 4 eta0 - 4 eta2)^2/16 - (eta1^2 + eta0((D-3)^2 - 4 eta2))]
    """
    eta0, eta1, eta2 = etas
    q2 = (2 * n + 1) ** 2
    res_linear = q2 + ((D - 1) ** 2 + 4 * eta0 - 4 * eta2 - 2) / 2
    rhs_quad = ((D - 3) ** 2 + 4 * eta0 - 4 * eta2) ** 2 / 16 - (eta1**2 + eta0 * ((D - 3) ** 2 - 4 * eta2))
    res_quadratic = q2 * ((D - 2) ** 2 - 4 * eta2) - rhs_quad
    return res_linear, res_quadratic


def quantized_l(ring: RingParams, D: int, Lam: float, n: int) -> float:
    """The separation constant l for the n-th polar state.

    Eliminating k between the perfect-square condition and the eigenvalue
    condition gives u0^2 + u2^2 = W and 2 u0 u2 = zeta', with
    W = ((D-3)/2)^2 + Lam - gamma' - kappa'. Hence u0 -+ u2 = sqrt(W -+ zeta')
    and L = u0^2 + (2n+1) u0 + n(n+1) - (D-3)/2 - ((D-3)/2)^2 + gamma'.
    """
    if D < 3:
        raise ValueError("the polar ring sector needs D >= 3")
    h = (D - 3) / 2
    W = h * h + Lam - ring.gamma_p - ring.kappa_p
    if W < abs(ring.zeta_p):
        raise DomainError(f"no regular solution: W = {W:.6g} < |zeta'| = {abs(ring.zeta_p):.6g}")
    u0 = 0.5 * (math.sqrt(W - ring.zeta_p) + math.sqrt(W + ring.zeta_p))
    L = u0 * u0 + (2 * n + 1) * u0 + n * (n + 1) - h - h * h + ring.gamma_p
    disc = ((D - 2) / 2) ** 2 + L
    if disc < 0:
        raise DomainError(f"l(l+D-2) = {L} has no real root")
    return -(D - 2) / 2 + math.sqrt(disc)


def _pick_k(cands_a, cands_b, n, D, etas, u0_of, strict=True):
    """Among matched root pairs keep admissible ones; prefer the larger u0.

    ``strict`` also demands the unsquared eigenvalue condition.
    """
    h = (D - 3) / 2
    best = None
    for ka in cands_a:
        for kb in cands_b:
            if abs(ka - kb) > ROOT_MATCH_TOL * max(1.0, abs(ka)):
                continue
            try:
                u0, u1, u2 = u0_of(ka)
            except (DomainError, ZeroDivisionError):
                continue
            if not (u0 - u2 > -1 and u0 + u2 > -1):
                continue
            # unsquared eigenvalue condition k - n(n+1) + h = (2n+1) u0
            if strict and abs(ka - n * (n + 1) + h - (2 * n + 1) * u0) > 1e-7 * max(1.0, abs(ka)):
                continue
            if best is None or u0 > best[1][0]:
                best = (ka, (u0, u1, u2))
    if best is None:
        raise DomainError("no admissible k: the two k quadratics share no root (l is not an eigenvalue)")
    return best


def general_path(ring: RingParams, D: int, l: float, Lam: float, n: int) -> AngularSolution:
    """eta_params -> both pairs of k roots -> matched root -> u_params."""
    etas = eta_params(ring, D, l, Lam)
    k7 = k_quadratic_roots(n, D, etas[2])
    k8 = k_constraint_roots(etas, D)
    k, (u0, u1, u2) = _pick_k(k7, k8, n, D, etas, lambda kk: u_params(etas, kk, D))
    return AngularSolution(*etas, u0, u1, u2, k, n, D, l, Lam, ring)


def solve_angular(ring: RingParams, D: int, Lam: float, n: int) -> AngularSolution:
    """n-th polar state: quantise l, then run the general path at that l."""
    l = quantized_l(ring, D, Lam, n)
    sol = general_path(ring, D, l, Lam, n)
    return replace(sol, phi_form=select_phi_form(sol))


# --- special cases ----------------------------------------------------------

def _close(a, b):
    return abs(a - b) <= 1e-12 * max(1.0, abs(a), abs(b))


def infer_case_sign(case_id: int, ring: RingParams) -> int:
    if case_id == 2:
        ref, other = ring.gamma_p, ring.zeta_p
    elif case_id == 4:
        ref, other = ring.kappa_p, ring.zeta_p
    else:
        return 1
    if _close(ref, other):
        return 1
    if _close(ref, -other):
        return -1
    raise PatternError(f"case {case_id} needs a +-zeta' relation")


def check_pattern(case_id: int, ring: RingParams, sign: int = 1) -> None:
    g, z, kp = ring.gamma_p, ring.zeta_p, ring.kappa_p
    ok = {
        1: g == 0 and z == 0,
        2: _close(g, sign * z),
        3: z == 0,
        4: g == 0 and _close(kp, sign * z),
    }.get(case_id)
    if ok is None:
        raise ValueError(f"case_id must be 1..4, got {case_id}")
    if not ok:
        raise PatternError(f"ring {ring} does not fit case {case_id} (sign {sign:+d})")


def specialize(
    case_id: int,
    ring: RingParams,
    D: int,
    l: float,
    Lam: float,
    n: int,
    sign: int | None = None,
    printed: bool = False,
) -> AngularSolution:
    """Polar solution assembled from the per-case closed forms.

    case 1: gamma' = zeta' = 0          case 2: gamma' = +-zeta'
    case 3: zeta' = 0                   case 4: gamma' = 0, kappa' = +-zeta'

    ``printed=True`` reproduces three published sign slips verbatim: the
    lower-sign u0 of case 2 (-+(zeta - L) instead of -+zeta + L), the +k
    under the case-3 u0 root, and the +-zeta' taken as eta1 in case 4.
    """
    if sign is None:
        sign = infer_case_sign(case_id, ring)
    check_pattern(case_id, ring, sign)
    g, z, kp = ring.gamma_p, ring.zeta_p, ring.kappa_p
    h = (D - 3) / 2
    L = l * (l + D - 2)
    d3 = (D - 3) ** 2

    if case_id == 1:
        e0, e1, e2 = kp + L - Lam, 0.0, -L
        X = d3 + 4 * e0 + 4 * L
        rad = X * X - 16 * (e0 * (d3 + 4 * L))

        def u_of(k):
            u0 = math.sqrt(_nonneg(h * h + L - k))
            return u0, (D - 3 - 2 * u0) / 2, 0.0

    elif case_id == 2:
        e0, e1, e2 = kp + L - Lam, z, sign * z - L
        X = d3 + 4 * e0 - 4 * sign * z + 4 * L
        rad = X * X - 16 * (z * z + e0 * (d3 - 4 * sign * z + 4 * L))

        def u_of(k):
            if printed:
                u0 = math.sqrt(_nonneg(h * h - sign * (z - L) - k))
            else:
                u0 = math.sqrt(_nonneg(h * h - sign * z + L - k))
            return u0, (D - 3 - 2 * u0) / 2, _ratio(z, u0)

    elif case_id == 3:
        e0, e1, e2 = kp + L - Lam, 0.0, g - L
        X = d3 + 4 * e0 - 4 * e2
        rad = X * X - 16 * (e0 * (d3 - 4 * e2))

        def u_of(k):
            sk = k if printed else -k
            u0 = math.sqrt(_nonneg(h * h - g + L + sk))
            return u0, (D - 3 - 2 * u0) / 2, 0.0

    else:
        e0, e2 = sign * z + L - Lam, -L
        e1 = sign * z if printed else z
        X = d3 + 4 * e0 + 4 * L
        rad = X * X - 16 * (z * z + e0 * (d3 + 4 * L))

        def u_of(k):
            u0 = math.sqrt(_nonneg(h * h + L - k))
            return u0, (D - 3 - 2 * u0) / 2, _ratio(e1, u0)

    if rad < 0:
        raise DomainError(f"negative radicand {rad} in the case {case_id} k formula")
    case_k = ((X + math.sqrt(rad)) / 8, (X - math.sqrt(rad)) / 8)
    etas = (e0, e1, e2)
    k7 = k_quadratic_roots(n, D, e2)
    k, (u0, u1, u2) = _pick_k(case_k, k7, n, D, etas, u_of, strict=not printed)
    sol = AngularSolution(e0, e1, e2, u0, u1, u2, k, n, D, l, Lam, ring)
    return sol


def _nonneg(x: float) -> float:
    if x < 0:
        if x > -1e-12:
            return 0.0
        raise DomainError(f"negative radicand {x}")
    return x


def _ratio(num: float, u0: float) -> float:
    if u0 == 0:
        if num != 0:
            raise ZeroDivisionError("u0 = 0 with eta1 != 0")
        return 0.0
    return num / (2 * u0)


# --- wavefunctions ----------------------------------------------------------

def _phi_exponents(sol: AngularSolution, phi_form: str) -> tuple[float, float]:
    """Exponents (e_minus, e_plus) of (1 - y) and (1 + y) in phi(y).

    The form name is the sign in front of (u1 + u2)/2 on the (1 - y) exponent.
    """
    if phi_form == "minus":
        return -(sol.u1 + sol.u2) / 2, (sol.u2 - sol.u1) / 2
    if phi_form == "plus":
        return (sol.u1 + sol.u2) / 2, (sol.u2 - sol.u1) / 2
    raise ValueError(f"phi_form must be one of {PHI_FORMS}")


def _integrable(sol: AngularSolution, phi_form: str) -> bool:
    em, ep = _phi_exponents(sol, phi_form)
    w = (sol.D - 3) / 2
    return 2 * em + w > -1 and 2 * ep + w > -1


def ode_residual(sol: AngularSolution, y, phi_form: str = "minus") -> np.ndarray:
    """Relative residual of the polar equation for H = phi * P_n^(alpha,beta).

    (1-y^2) H'' - (D-1) y H' + [L - Lam/(1-y^2) + U(y)] H, divided by
    max|H| times the size of the coefficients. Term magnitudes are no good as
    a scale: for a nearly flat H every term is tiny and rounding dominates.
    """
    y = np.asarray(y, dtype=float)
    em, ep = _phi_exponents(sol, phi_form)
    a, b, n = sol.jacobi_alpha, sol.jacobi_beta, sol.n
    Y = jacobi_eval(n, a, b, y)
    Y1 = jacobi_derivative(n, a, b, y, 1)
    Y2 = jacobi_derivative(n, a, b, y, 2)
    p = -em / (1 - y) + ep / (1 + y)
    dp = -em / (1 - y) ** 2 - ep / (1 + y) ** 2
    H = Y
    H1 = Y1 + p * Y
    H2 = Y2 + 2 * p * Y1 + (p * p + dp) * Y
    r = sol.ring
    U = (r.gamma_p * y * y + r.zeta_p * y + r.kappa_p) / (1 - y * y)
    t1 = (1 - y * y) * H2
    t2 = -(sol.D - 1) * y * H1
    t3 = (sol.L - sol.Lam / (1 - y * y) + U) * H
    coef = 1 + sol.D + abs(sol.L) + abs(sol.Lam) + abs(r.gamma_p) + abs(r.zeta_p) + abs(r.kappa_p)
    scale = coef * np.max(np.abs(H))
    return np.abs(t1 + t2 + t3) / (scale if scale > 0 else 1.0)


def phi_form_diagnostics(sol: AngularSolution) -> dict[str, dict]:
    y = np.linspace(-0.95, 0.95, 39)
    out = {}
    for form in PHI_FORMS:
        out[form] = {
            "integrable": _integrable(sol, form),
            "ode_residual": float(np.max(ode_residual(sol, y, form))),
        }
    return out


def select_phi_form(sol: AngularSolution) -> str:
    """The square-integrable phi exponent choice that solves the equation."""
    diag = phi_form_diagnostics(sol)
    usable = [f for f in PHI_FORMS if diag[f]["integrable"]]
    if not usable:
        raise NonNormalizableError("neither phi exponent choice is square-integrable")
    return min(usable, key=lambda f: diag[f]["ode_residual"])


def ring_wavefunction(sol: AngularSolution, theta, phi_form: str | None = None, normalized: bool = True):
    """H_n(theta) = phi(cos theta) P_n^(u0-u2, u0+u2)(cos theta).

    Normalised so that the integral of H^2 sin^(D-2) over (0, pi) is 1.
    """
    form = phi_form or sol.phi_form
    if not _integrable(sol, form):
        raise NonNormalizableError(f"phi form {form!r} is not square-integrable for this solution")
    em, ep = _phi_exponents(sol, form)
    th = np.asarray(theta, dtype=float)
    y = np.cos(th)
    H = (1 - y) ** em * (1 + y) ** ep * jacobi_eval(sol.n, sol.jacobi_alpha, sol.jacobi_beta, y)
    if normalized:
        if form == "minus":
            norm = jacobi_norm(sol.n, sol.jacobi_alpha, sol.jacobi_beta)
        else:
            from .oracle import quadrature

            e_minus = 2 * em + (sol.D - 3) / 2
            e_plus = 2 * ep + (sol.D - 3) / 2
            P = lambda t: jacobi_eval(sol.n, sol.jacobi_alpha, sol.jacobi_beta, t) ** 2
            norm = quadrature(P, -1.0, 1.0, endpoint_powers=(e_plus, e_minus)).value
        H = H / math.sqrt(norm)
    return float(H) if np.ndim(theta) == 0 else H
