"""Exception and warning types shared across the package."""


class HypersfError(Exception):
    """Base class for all errors raised by hypersf."""


class DomainError(HypersfError, ValueError):
    """Arguments lie outside the domain where a formula is valid."""


class PoleError(DomainError):
    """A Gamma function or Pochhammer symbol hits an uncancelled pole."""


class ContourError(DomainError):
    """No admissible Mellin-Barnes contour exists for the given poles."""


class OutOfRegionError(DomainError):
    """Series arguments fall outside the region of convergence.

    ``failed`` names the arguments that failed the test.
    """

    def __init__(self, message, failed=()):
        super().__init__(message)
        self.failed = tuple(failed)


class ConvergenceError(HypersfError, ArithmeticError):
    """A series, integral or iteration did not reach the requested tolerance."""


class PrecisionWarning(UserWarning):
    """A result was produced but its accuracy is likely degraded."""
