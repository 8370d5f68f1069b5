class DomainError(ValueError):
    """Invalid quantum numbers, mismatched manifolds, malformed inputs."""


class ParameterError(ValueError):
    """A code-family constructor was given parameters outside its bounds."""


class InfeasibleError(Exception):
    """A moment-matching system has no nonnegative solution.

    ``certificate`` describes which moment constraint could not be met.
    """

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class SearchSpaceError(Exception):
    """A scan request exceeds the documented enumeration caps."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate
