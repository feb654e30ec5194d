"""Exception types raised by the model."""


class DomainError(ValueError):
    """An input lies outside the physical domain of an operation."""


class GateDisabledError(RuntimeError):
    """A gate observable was requested for a model without a gate (C_g = 0)."""


class FluxBranchError(DomainError):
    """External flux puts cos(2*pi*phi_ext) on the invalid branch (<= 0)."""


class FluxDivergenceError(FluxBranchError):
    """Josephson inductance diverges: cos(2*pi*phi_ext) is numerically zero."""


class PoleSearchError(RuntimeError):
    """Newton polishing failed; ``candidates`` holds the unpolished seeds."""

    def __init__(self, message, candidates=()):
        super().__init__(message)
        self.candidates = list(candidates)


class NotSplitError(RuntimeError):
    """The charge response has a single peak, so no splitting exists."""


class InstabilityError(RuntimeError):
    """Time integration blew up."""

    def __init__(self, message, step):
        super().__init__(message)
        self.step = step


class SpectralCoverageError(ValueError):
    """The drive spectrum does not cover the requested band with enough margin."""

    def __init__(self, message, margin_db):
        super().__init__(message)
        self.margin_db = margin_db


class ScenarioError(ValueError):
    """Scenario configuration failed validation. ``path`` names the field."""

    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
