"""Exception types shared across the toolkit."""


class CertificationError(RuntimeError):
    """A required interval certificate could not be produced."""


class FalsificationError(AssertionError):
    """A checked theorem-level assertion failed on concrete data."""


class FlowEscapeError(RuntimeError):
    """A trajectory left the configured bounding region."""


class SeedRefinementError(RuntimeError):
    """A zero-set seed could not be polished to the requested residual."""
