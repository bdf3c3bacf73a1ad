"""Exception hierarchy shared by the library and the command line."""


class ExposureHawkesError(Exception):
    """Base class for all package errors."""


class DataError(ExposureHawkesError, ValueError):
    """Input data is malformed: bad counts, duplicate or missing dates."""


class ConfigError(ExposureHawkesError, ValueError):
    """Input is well formed but does not match the requested configuration,
    e.g. a required column is absent."""


class ExplosionError(ExposureHawkesError, RuntimeError):
    """A simulated day's expected count exceeded the safety cap."""

    def __init__(self, day, expected, cap):
        self.day = day
        self.expected = expected
        self.cap = cap
        super().__init__(
            f"expected count {expected:.4g} on day {day} exceeds cap {cap:.4g}; "
            "the configuration is likely supercritical"
        )
