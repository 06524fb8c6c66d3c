"""Exception types shared across the toolkit."""


class ToolkitError(Exception):
    """Base class for all toolkit errors."""


class DimensionMismatch(ToolkitError):
    """Operands have incompatible shapes."""


class NonFinite(ToolkitError):
    """A NaN or infinity reached a numeric kernel."""


class OutOfRange(ToolkitError):
    """A delayed lookup asked for history that is no longer retained."""


class NonStabilizable(ToolkitError):
    """No stabilizing Riccati solution could be found."""


class Singular(ToolkitError):
    """A matrix that must be invertible is singular."""


class NoConvergence(ToolkitError):
    """An iterative solver exhausted its budget."""


class Overflow(ToolkitError):
    """A matrix exponential left the representable range."""


class RankDeficient(ToolkitError):
    """A full-column-rank matrix was expected."""


class NotObservable(ToolkitError):
    """Pole placement requires an observable pair."""


class UnsupportedMultiOutput(ToolkitError):
    """The operation is defined for single-output systems only."""


class NotOnGrid(ToolkitError):
    """A trigger check ran at a time that is not on the check grid."""


class InvalidBounds(ToolkitError):
    """Saturation bounds are reversed."""


class Diverged(ToolkitError):
    """A simulated state left the admissible range."""


class ConfigError(ToolkitError):
    """A scenario configuration is inconsistent or malformed."""


class EmptyWindow(ToolkitError):
    """A metrics window contains no samples."""
