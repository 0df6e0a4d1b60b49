"""Exception types shared across the package."""


class ZariskiError(Exception):
    """Base class for all errors raised by this package."""


class CapExceeded(ZariskiError):
    """A configured size limit was exceeded; carries the offending count."""

    def __init__(self, what: str, count: int, cap: int):
        super().__init__(f"{what}: {count} exceeds cap {cap}")
        self.what = what
        self.count = count
        self.cap = cap


class EmptySpectrum(ZariskiError):
    """Raised by T-dependent entry points when Spec(M) is empty."""


class NotClosedError(ZariskiError):
    """A subset of Spec(M) was required to be Zariski-closed and is not."""
