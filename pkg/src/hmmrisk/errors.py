"""Exception types shared across the package."""


class HmmError(Exception):
    """Base class for all package-specific errors."""


class ZeroEvidenceError(HmmError):
    """The observation sequence has probability zero under the model."""


class NoFinitePathError(HmmError):
    """Every candidate path has infinite risk; no feasible path exists."""


class KOutOfRangeError(HmmError, ValueError):
    """Block length k outside the supported range for this operation."""


class InstanceTooLargeError(HmmError):
    """Exhaustive enumeration refused: the path space exceeds the size cap."""


class DirectLikelihoodNotGenerativeError(HmmError):
    """Sampling requested from a model whose emissions are a fixed likelihood table."""


class ParseError(HmmError, ValueError):
    """A model, observation, or label file could not be parsed."""
