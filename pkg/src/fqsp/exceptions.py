"""Exception hierarchy shared across the package."""


class FqspError(Exception):
    """Base class for all errors raised by fqsp."""


class ApproximationError(FqspError):
    """A Fourier approximation could not meet its error contract."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class SearchCeilingError(ApproximationError):
    """The truncation-order search exceeded ``q_max``."""

    def __init__(self, message, best_q=None, best_error=None):
        super().__init__(message)
        self.best_q = best_q
        self.best_error = best_error


class ComplementError(FqspError):
    """Root pairing or the unitarity check failed while building a complement."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class SynthesisError(FqspError):
    """Pulse synthesis left a residual above tolerance."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals


class PipelineError(FqspError):
    """An end-to-end pipeline stage failed; ``stage`` names which one."""

    def __init__(self, stage, cause):
        super().__init__(f"[{stage}] {cause}")
        self.stage = stage
        self.cause = cause
