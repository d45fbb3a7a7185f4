"""Bound states of tanh^2/coth^2 potentials with a ring-shaped term in D
dimensions, solved in closed form and checked against finite differences."""
from .angular import AngularSolution, RingParams, general_path, ring_wavefunction, solve_angular, specialize
from .geometry import QuantumNumbers, centrifugal_gamma
from .radial import (
    InadmissibleStateError,
    PotentialParams,
    energy_physical,
    radial_eigenstate,
    radial_wavefunction,
)
from .specfun import DomainError, PoleError, jacobi_eval, jacobi_norm

__version__ = "0.1.0"

__all__ = [
    "AngularSolution", "RingParams", "general_path", "ring_wavefunction", "solve_angular", "specialize",
    "QuantumNumbers", "centrifugal_gamma",
    "InadmissibleStateError", "PotentialParams", "energy_physical", "radial_eigenstate", "radial_wavefunction",
    "DomainError", "PoleError", "jacobi_eval", "jacobi_norm",
]
