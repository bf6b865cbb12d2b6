"""Exception types shared across the package."""


class GuardError(RuntimeError):
    """An enumeration or solver size guard was exceeded.

    Raised instead of attempting a computation that would blow the
    documented time or memory budget.  The CLI maps this to exit code 3.
    """


class EigensolverError(RuntimeError):
    """A dense eigensolve failed to converge or failed its residual check."""


class NonCenteredError(ValueError):
    """A coupling distribution has nonzero mean and no explicit override.

    The rigorous lower bound assumes centered couplings; constructing a
    non-centered distribution requires ``allow_noncentered=True`` and taints
    every downstream report.
    """
