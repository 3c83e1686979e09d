"""Supersymmetric (Darboux) partners of the trigonometric Rosen-Morse potential.

Modules: ``specfun`` (Gamma, 2F1), ``trm`` (potential, spectrum, solutions),
``susy1`` and ``susy2`` (first- and second-order transformations), ``oracle``
(finite-difference spectra, node counts, residuals, quadrature) and ``cli``.
"""

from .errors import (ConvergenceError, DegenerateEnergyError, DomainError,
                     InvalidSeedCombination, NumericalError, ParameterPoleError, PoleError,
                     PreconditionError, SingularTransformError, SpectralCollisionError,
                     SusyTrmError)
from .trm import TrmParams, bound_energy, bound_state, general_solution, psi_L, psi_R

__version__ = "0.1.0"

__all__ = [
    "TrmParams", "bound_energy", "bound_state", "general_solution", "psi_L", "psi_R",
    "SusyTrmError", "PreconditionError", "DomainError", "NumericalError", "PoleError",
    "ParameterPoleError", "ConvergenceError", "SpectralCollisionError",
    "DegenerateEnergyError", "SingularTransformError", "InvalidSeedCombination",
]
