"""
Ring-shaped angular terms
=========================

With a ring term the polar quantum number stops being an integer. Here
it is computed, checked against a finite-difference solve, and fed
back into the radial energy.
"""

import numpy as np

from nuspectra import angular, oracle, radial
from nuspectra.radial import PotentialParams

# No ring: l comes back as an integer (here m=1, n=2, so l=3).
free = angular.solve_angular(angular.RingParams(), 3, 1.0, 2)
print("free l:", free.l)

ring = angular.RingParams(0.6, 0.0, -0.4)
for n in range(3):
    sol = angular.solve_angular(ring, 4, 3.0, n)
    print(n, "l =", sol.l, "L =", sol.L)

# Richardson on two grids gets close to the closed form.
a = oracle.angular_solve(ring, 4, 3.0, 4000, 3).eigenvalues
b = oracle.angular_solve(ring, 4, 3.0, 8000, 3).eigenvalues
print("oracle L:", oracle.richardson(a, b))

# The four special cases are shortcuts through the same algebra.
ref = angular.solve_angular(ring, 4, 3.0, 1)
short = angular.specialize(3, ring, 4, ref.l, 3.0, 1)
print("case 3 shortcut u0:", short.u0, "general path u0:", ref.u0)

# A non-integer l goes straight into the radial sector.
p = PotentialParams(10.0, 3.0, 0.5)
l = angular.solve_angular(ring, 3, 1.0, 0).l
print("E(n=0, l=%.4f) =" % l, radial.energy_physical(0, l, 3, p))

theta = np.linspace(0.05, np.pi - 0.05, 7)
print(angular.ring_wavefunction(angular.solve_angular(ring, 3, 1.0, 0), theta))
