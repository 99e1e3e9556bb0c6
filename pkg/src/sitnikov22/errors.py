"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class SingularityError(DomainError):
    """Evaluation requested on the collision set where the map is singular."""


class NonexistentLevelError(DomainError):
    """Energy level below the global minimum of the Hamiltonian."""


class InvalidLevelError(ValueError):
    """Regularized initial condition violates the L = 0 energy relation."""


class NotAtCollisionError(ValueError):
    """Bounce map applied to a state that is not on the collision set."""


class ConvergenceError(RuntimeError):
    """An iterative solver failed to reach its tolerance."""


class StepFailureError(RuntimeError):
    """Adaptive integration could not meet the requested tolerance."""


class PrecisionWarning(RuntimeWarning):
    """Result is returned but carries degraded floating-point accuracy."""
