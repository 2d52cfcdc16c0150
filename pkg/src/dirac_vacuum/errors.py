"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid physical parameters or run configuration."""


class BandEdgeError(ConfigError):
    """A first-hop transition energy sits too close to the drive bandlimit.

    Convergence in the time window degrades like 1/(T * (m - |de|)) near the
    edge, so such configurations are rejected up front; change m, w, or L.
    """


class ToleranceError(RuntimeError):
    """An integration finished outside its accuracy contract (norm drift)."""


class FitError(RuntimeError):
    """A scaling fit received inconsistent data (e.g. mixed-sign shifts)."""
