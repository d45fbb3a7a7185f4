"""Classical special functions: Jacobi polynomials, log-gamma, real binomials
and the terminating 3F2 at unit argument."""
from __future__ import annotations

import math

import numpy as np


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class PoleError(ArithmeticError):
    """A gamma function or Pochhammer denominator hits a pole."""


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


def log_gamma(x: float) -> tuple[float, int]:
    """Return ``(log|Gamma(x)|, sign(Gamma(x)))``.

    Raises PoleError at the nonpositive integers.
    """
    x = float(x)
    if _is_nonpositive_integer(x):
        raise PoleError(f"Gamma has a pole at x={x}")
    value = math.lgamma(x)
    if x > 0:
        return value, 1
    sign = 1 if math.floor(x) % 2 == 0 else -1
    return value, sign


def gamma_ratio(num: list[float], den: list[float]) -> float:
    """Product of Gamma(num) divided by product of Gamma(den), in log space."""
    log_total = 0.0
    sign = 1
    for x in num:
        v, s = log_gamma(x)
        log_total += v
        sign *= s
    for x in den:
        v, s = log_gamma(x)
        log_total -= v
        sign *= s
    return sign * math.exp(log_total)


def gen_binomial(top: float, k: int) -> float:
    """Binomial coefficient C(top, k) for real ``top`` and integer ``k >= 0``."""
    if k < 0:
        raise DomainError("k must be nonnegative")
    result = 1.0
    for j in range(k):
        result *= (top - j) / (j + 1)
    return result


def pochhammer(x: float, k: int) -> float:
    result = 1.0
    for j in range(k):
        result *= x + j
    return result


def hyp3f2_terminating(n: int, p2: float, p3: float, q1: float, q2: float) -> float:
    """Terminating 3F2(-n, p2, p3; q1, q2; 1) as an exact finite sum.

    Terms are built from their successive ratios and added with fsum; each
    carries a relative error of a few n ulps, so the absolute error is of
    order n eps sum|term|, large next to the result when the terms cancel. The numerator and
    denominator pairs are multiplied first so that swapping ``p2 <-> p3``
    or ``q1 <-> q2`` gives a bit-identical result.
    """
    if n < 0:
        raise DomainError("n must be nonnegative")
    return math.fsum(_hyp3f2_terms(n, p2, p3, q1, q2))


def _hyp3f2_terms(n, p2, p3, q1, q2):
    terms = [1.0]
    for j in range(n):
        den = (q1 + j) * (q2 + j)
        if den == 0.0:
            raise PoleError(f"denominator Pochhammer vanishes at j={j}")
        terms.append(terms[-1] * (-n + j) * ((p2 + j) * (p3 + j)) / (den * (j + 1)))
    return terms


def _jacobi_recurrence(n: int, a: float, b: float, y: np.ndarray) -> np.ndarray | None:
    p_prev = np.ones_like(y)
    if n == 0:
        return p_prev
    p = (a + 1) + (a + b + 2) * (y - 1) / 2
    for k in range(2, n + 1):
        s = 2 * k + a + b
        c0 = 2 * k * (k + a + b) * (s - 2)
        if c0 == 0:
            return None
        c1 = (s - 1) * (s * (s - 2) * y + a * a - b * b)
        c2 = 2 * (k + a - 1) * (k + b - 1) * s
        p_prev, p = p, (c1 * p - c2 * p_prev) / c0
    return p


def jacobi_sum_form(n: int, a: float, b: float, y) -> np.ndarray:
    """Explicit binomial sum for P_n^(a,b)(y).

    2^-n sum_m C(n+a, m) C(n+b, n-m) (y-1)^(n-m) (y+1)^m
    """
    y = np.asarray(y, dtype=float)
    total = np.zeros_like(y)
    for m in range(n + 1):
        coef = gen_binomial(n + a, m) * gen_binomial(n + b, n - m)
        total = total + coef * (y - 1) ** (n - m) * (y + 1) ** m
    return total / 2.0**n


def jacobi_eval(n: int, alpha: float, beta: float, y):
    """Jacobi polynomial P_n^(alpha, beta)(y) by the three-term recurrence.

    Accepts scalar or array ``y``. Parameter pairs for which the recurrence
    divides by zero (e.g. ``alpha + beta`` a negative integer) fall back to the
    explicit binomial sum.
    """
    if n < 0:
        raise DomainError("degree must be nonnegative")
    arr = np.asarray(y, dtype=float)
    out = _jacobi_recurrence(n, float(alpha), float(beta), arr)
    if out is None:
        out = jacobi_sum_form(n, alpha, beta, arr)
    if np.ndim(y) == 0:
        return float(out)
    return out


def jacobi_derivative(n: int, alpha: float, beta: float, y, order: int = 1):
    """k-th derivative of P_n^(alpha, beta), via
    d/dy P_n^(a,b) = (n + a + b + 1)/2 * P_{n-1}^(a+1,b+1)."""
    if order > n:
        return 0.0 * np.asarray(y, dtype=float) if np.ndim(y) else 0.0
    scale = 1.0
    for j in range(order):
        scale *= (n + alpha + beta + 1 + j) / 2
    return scale * jacobi_eval(n - order, alpha + order, beta + order, y)


def jacobi_ode_residual(n: int, alpha: float, beta: float, y) -> np.ndarray:
    """Residual of the Jacobi differential equation at ``y``."""
    p = jacobi_eval(n, alpha, beta, y)
    dp = jacobi_derivative(n, alpha, beta, y, 1)
    d2p = jacobi_derivative(n, alpha, beta, y, 2)
    y = np.asarray(y, dtype=float)
    return (
        (1 - y * y) * d2p
        - ((alpha + beta + 2) * y + alpha - beta) * dp
        + n * (n + alpha + beta + 1) * p
    )


def jacobi_norm(n: int, alpha: float, beta: float) -> float:
    """Self-overlap of P_n^(alpha,beta) under the weight (1-y)^alpha (1+y)^beta."""
    if alpha <= -1 or beta <= -1:
        raise DomainError("Jacobi normalization needs alpha, beta > -1")
    pref = 2.0 ** (alpha + beta + 1)
    if n == 0:
        # (a+b+1) Gamma(a+b+1) = Gamma(a+b+2) keeps a+b = -1 finite
        return pref * gamma_ratio([alpha + 1, beta + 1], [alpha + beta + 2])
    return pref / (2 * n + alpha + beta + 1) * gamma_ratio(
        [n + alpha + 1, n + beta + 1], [n + alpha + beta + 1, n + 1]
    )


def jacobi_moment(n: int, a: float, b: float, c: float, d: float) -> float:
    """Closed form of the integral of (1-y)^c (1+y)^d P_n^(a,b)(y) over [-1, 1].

    Valid for c, d > -1; anything else raises DomainError. The Gamma(a+1)
    ratio is kept as the Pochhammer (a+1)_n / n! so integer a <= -1 work too.
    """
    if c <= -1 or d <= -1:
        raise DomainError(f"moment integral diverges for c={c}, d={d}")
    pref = 2.0 ** (c + d + 1) * gamma_ratio([c + 1, d + 1], [c + d + 2])
    pref *= pochhammer(a + 1, n) / math.factorial(n)
    return pref * hyp3f2_terminating(n, n + a + b + 1, c + 1, a + 1, c + d + 2)
