"""Exception types shared across the package (the CLI maps each to an exit code)."""


class ValidationError(ValueError):
    """Malformed input: bad distribution, metric, or problem document."""


class CapabilityError(RuntimeError):
    """The request lies outside what an engine or enumerator supports."""


class NumericInfeasibleError(RuntimeError):
    """A numeric search found no feasible point."""
