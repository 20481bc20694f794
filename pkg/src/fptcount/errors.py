"""Exception types shared across the package."""


class CapExceededError(RuntimeError):
    """An exhaustive routine was asked to enumerate more than its configured limit."""


class NoWitnessError(ValueError):
    """Sampling was requested from an empty witness set."""


class OracleInconsistencyError(RuntimeError):
    """A set-system oracle contradicted itself (sampled element outside its own set)."""


class NonMonotonePropertyError(ValueError):
    pass
