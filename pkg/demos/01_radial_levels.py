"""
Bound levels of the tanh-shaped potential
=========================================

Closed-form levels, a finite-difference cross-check, and what the
wavefunction looks like.
"""

import numpy as np

from nuspectra import oracle, radial
from nuspectra.radial import PotentialParams

# A well with A=10, B=3 and range parameter lambda=0.5, in three dimensions.
p = PotentialParams(10.0, 3.0, 0.5)

# Only a couple of radial states fit under the asymptote for l=0.
top = radial.max_radial_n(p, 3, 0)
print("highest admitted n:", top)

for n in range(top + 1):
    print(n, radial.energy_physical(n, 0, 3, p))

# Asking past the top raises instead of returning a nonsense number.
try:
    radial.radial_eigenstate(top + 1, 0, 3, p)
except radial.InadmissibleStateError as exc:
    print("n =", top + 1, "->", exc)

# Same levels from a plain finite-difference Hamiltonian on (0, 40].
grid = oracle.Grid(0.0, 40.0, 4000)
fd = oracle.radial_solve(radial.exact_potential(p, 3, 0), grid, top + 1)
print("finite difference:", fd.eigenvalues)

# The ground state; it integrates to one.
st = radial.radial_eigenstate(0, 0, 3, p)
r = np.linspace(0, radial.default_rmax(p.lam, st.sech_power), 4001)
g = radial.radial_wavefunction(st, r)
print("norm:", oracle.trapezoid_weights(r) @ g**2)
print("peak at r =", r[np.argmax(np.abs(g))])
