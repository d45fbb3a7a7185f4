"""Hyperspherical coordinates and the separation constants of the
D-dimensional problem."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class QuantumNumbers:
    """Labels of a separable D-dimensional state.

    ``ladder`` holds l_1 <= ... <= l_{D-2} (with l_1 = |m|), ``l`` is l_{D-1}
    and ``n_r`` counts radial nodes.
    """

    D: int
    l: int
    ladder: tuple[int, ...] = field(default_factory=tuple)
    n_r: int = 0

    def __post_init__(self):
        if self.D < 2:
            raise ValueError("dimension must be at least 2")
        if self.l < 0 or self.n_r < 0:
            raise ValueError("quantum numbers must be nonnegative")
        ladder = tuple(self.ladder)
        if len(ladder) != max(self.D - 2, 0):
            raise ValueError(f"ladder needs {max(self.D - 2, 0)} entries, got {len(ladder)}")
        if any(v < 0 for v in ladder):
            raise ValueError("ladder entries must be nonnegative")
        if any(a > b for a, b in zip(ladder, ladder[1:])):
            raise ValueError("ladder must be nondecreasing")
        if ladder and ladder[-1] > self.l:
            raise ValueError("l_{D-2} may not exceed l")
        object.__setattr__(self, "ladder", ladder)

    @property
    def m(self) -> int:
        return self.ladder[0] if self.ladder else 0

    def separation_constant(self, j: int) -> float:
        """Lambda_j for 1 <= j <= D-1 (j = D-1 uses l)."""
        lj = self.l if j == self.D - 1 else self.ladder[j - 1]
        return angular_separation_constant(lj, j)


def centrifugal_gamma(D: int, l: float) -> float:
    """Effective centrifugal strength ((D + 2l - 2)^2 - 1) / 4."""
    if D < 2:
        raise ValueError("dimension must be at least 2")
    return ((D + 2 * l - 2) ** 2 - 1) / 4


def angular_separation_constant(l_j: float, j: int) -> float:
    """Lambda_j = l_j (l_j + j - 1)."""
    if j < 1:
        raise ValueError("j must be >= 1")
    return l_j * (l_j + j - 1)


def to_cartesian(r: float, angles) -> np.ndarray:
    """Map (r, theta_1, ..., theta_{D-1}) to Cartesian (x_1, ..., x_D).

    theta_1 is the azimuth; theta_{D-1} is the polar-most angle, so that
    x_D = r cos(theta_{D-1}).
    """
    th = np.asarray(angles, dtype=float)
    if th.ndim != 1 or th.size < 1:
        raise ValueError("need a 1-D list of D-1 >= 1 angles")
    D = th.size + 1
    sins = np.sin(th)
    # tail[j] = prod_{k >= j} sin(theta_k), with 0-based angle index
    tail = np.ones(D)
    for j in range(D - 2, -1, -1):
        tail[j] = tail[j + 1] * sins[j]
    x = np.empty(D)
    x[0] = r * math.cos(th[0]) * tail[1]
    x[1] = r * math.sin(th[0]) * tail[1]
    for j in range(3, D + 1):
        x[j - 1] = r * math.cos(th[j - 2]) * tail[j - 1]
    return x


def volume_weight(angles, D: int) -> float:
    """Angular part of the volume element, prod_j sin(theta_j)^(j-1)."""
    th = np.asarray(angles, dtype=float)
    if th.size != D - 1:
        raise ValueError(f"expected {D - 1} angles for D={D}")
    powers = np.arange(D - 1)
    return float(np.prod(np.sin(th) ** powers))


def sphere_area(D: int) -> float:
    """Surface area of the unit (D-1)-sphere, 2 pi^(D/2) / Gamma(D/2)."""
    return 2 * math.pi ** (D / 2) / math.gamma(D / 2)
