"""Exception types shared across the toolkit."""


class PerceptaError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(PerceptaError, ValueError):
    """A parameter violates its documented domain (bad range, degenerate
    safe zone, negative threshold, and so on)."""


class DataError(PerceptaError, ValueError):
    """A file or payload is malformed. The message names the offending
    field where possible."""


class StructuralError(PerceptaError, ValueError):
    """A merge tree or derived structure violates its invariants
    (e.g. no component with infinite death)."""


class DegenerateDesignError(PerceptaError, ValueError):
    """The regression design matrix is rank deficient, typically because
    all predictor values coincide."""
