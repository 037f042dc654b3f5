"""Exception types raised by reject_gate."""


class RejectGateError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(RejectGateError, ValueError):
    pass


class NotPositiveDefinite(RejectGateError, ValueError):
    pass


class SingularDesign(RejectGateError, ValueError):
    """Weighted normal equations of a maximum-likelihood fit are not invertible."""


class ZeroEvidence(RejectGateError, ValueError):
    """Observed data has zero likelihood under every grid parameter."""


class EnumerationTooLarge(RejectGateError, ValueError):
    pass


class EmptyInput(RejectGateError, ValueError):
    pass


class ConfigError(RejectGateError, ValueError):
    """Invalid experiment configuration; ``field`` names the offending key."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
