"""Exception types shared across the package."""


class GridMismatchError(ValueError):
    """Operands are sampled on different or incompatible grids."""


class OverflowGuardError(FloatingPointError):
    """A special-function recurrence left the representable range."""


class RetrievalError(RuntimeError):
    """Base class for numeric failures of the retrieval pipeline."""


class EmptyMaskError(RetrievalError):
    """The reconstruction region is empty at the requested tolerance."""


class DegenerateAnchorError(RetrievalError):
    """No admissible anchor point: the anchor profile is numerically zero."""
