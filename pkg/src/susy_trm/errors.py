"""Exception hierarchy shared by the library and the CLI.

Every error carries an ``exit_code`` so the command-line front end can map
library failures onto its documented exit statuses without a lookup table.
"""


class SusyTrmError(Exception):
    """Base class for all library errors."""

    exit_code = 5


class PreconditionError(SusyTrmError, ValueError):
    """Input violates a documented precondition (bad parameters, bad seed)."""

    exit_code = 2


class DomainError(PreconditionError):
    """Coordinate outside the open interval (0, pi)."""


class BranchError(PreconditionError):
    """Square-root branch of the auxiliary exponents is undefined."""


class NumericalError(SusyTrmError, ArithmeticError):
    """A numerical procedure failed."""

    exit_code = 5


class PoleError(NumericalError):
    """Gamma function evaluated at (or within tolerance of) a pole."""


class ParameterPoleError(NumericalError):
    """Hypergeometric lower parameter sits on a non-positive integer."""


class ConvergenceError(NumericalError):
    """A series or adaptive procedure did not converge within its budget."""


class SpectralCollisionError(PreconditionError):
    """Energy coincides with an eigenvalue where a gap energy is required."""


class DegenerateEnergyError(PreconditionError):
    """Mapping requested at a factorization energy itself."""


class SingularTransformError(SusyTrmError):
    """The transformation would introduce a singularity inside (0, pi)."""

    exit_code = 3


class InvalidSeedCombination(SusyTrmError):
    """Seed pair does not satisfy any admissible second-order sub-case."""

    exit_code = 3
