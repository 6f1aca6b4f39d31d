"""Exception types shared across the package.

Domain errors (empty subspace, degenerate cat, zero conditioning support)
map to exit code 3 in the command-line interface; configuration errors map
to exit code 2.
"""


class EcsimError(Exception):
    """Base class for all package errors."""


class ConfigError(EcsimError, ValueError):
    """A run configuration could not be parsed or failed validation."""


class DomainError(EcsimError, ValueError):
    """The requested quantity is undefined for the given inputs."""


class EmptySubspaceError(DomainError):
    pass


class InconsistentBasisError(DomainError):
    """Tuples of a subspace basis do not share one total energy."""


class UndefinedMixtureError(DomainError):
    """The projected state has zero norm, so the reduced state is undefined."""


class UndefinedConditioningError(DomainError):
    """The conditioning window has no support on the coherent state."""


class DegenerateCatError(DomainError):
    """A cat state with zero displacement is the zero vector."""


class OptimizationError(DomainError):
    pass
