"""Exception types shared across the package."""


class TwinspecError(Exception):
    """Base class for all package errors."""


class ModelError(TwinspecError):
    """Invalid aggregate model (bad energies, dimensions, non-Hermitian input...)."""


class GeometryError(ModelError):
    """Degenerate geometry, e.g. coincident chromophore positions."""


class LightKindError(TwinspecError):
    """A correlation function was called with the wrong kind of light."""


class DegenerateInputError(TwinspecError):
    """A resonance denominator collapsed below the guard threshold."""


class NormalizationError(TwinspecError):
    """Trace normalization was requested for an (almost) zero matrix."""


class ConvergenceError(TwinspecError):
    """Oracle quadrature did not converge under grid doubling.

    Carries both the coarse and the fine result so the caller can inspect
    the discrepancy.
    """

    def __init__(self, message, coarse=None, fine=None):
        super().__init__(message)
        self.coarse = coarse
        self.fine = fine


class ConfigError(TwinspecError):
    """Run configuration or model file failed to parse or validate."""


class VerificationFailure(TwinspecError):
    """One or more closed-form/oracle comparisons exceeded tolerance."""
