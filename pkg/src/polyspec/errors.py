"""Exception types raised across polyspec."""


class PolyspecError(Exception):
    """Base class for all polyspec errors."""


class UnsupportedPNorm(PolyspecError, ValueError):
    pass


class SingularMatrix(PolyspecError, ValueError):
    pass


class SingularLeadingCoefficient(SingularMatrix):
    pass


class NotMonic(PolyspecError, ValueError):
    pass


class SizeMismatch(PolyspecError, ValueError):
    pass


class OracleSizeExceeded(PolyspecError, ValueError):
    pass


class HypothesisViolation(PolyspecError):
    """A bound's hypotheses failed while running in strict mode."""

    def __init__(self, bound_id, failed):
        self.bound_id = bound_id
        self.failed = list(failed)
        super().__init__(f"{bound_id}: hypotheses violated: {', '.join(self.failed)}")


class BadInterval(PolyspecError, ValueError):
    pass


class OrderTooSmall(PolyspecError, ValueError):
    pass


class ConvergenceFailure(PolyspecError, RuntimeError):
    """QR iteration ran out of sweeps; ``partial`` holds whatever converged."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
