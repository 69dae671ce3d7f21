"""Exception and warning types shared across the package."""

from __future__ import annotations


class InvalidArgumentError(ValueError):
    pass


class UnsupportedCaseError(ValueError):
    pass


class InternalConsistencyError(RuntimeError):
    """Raised when an identity that must hold by construction is violated."""


class InvalidConfigurationError(ValueError):
    pass


class DomainError(ValueError):
    """A point lies too close to the excluded diagonal or to a pole."""

    def __init__(self, message: str, pair: tuple | None = None):
        super().__init__(message)
        self.pair = pair


class DegeneratePointError(ValueError):
    pass


class NotASolutionError(ValueError):
    pass


class PreconditionError(ValueError):
    pass


class NotCriticalError(ValueError):
    pass


class ReconstructionError(RuntimeError):
    pass


class SolverCoverageWarning(UserWarning):
    """Fewer critical orbits were found than the closed formula predicts."""
