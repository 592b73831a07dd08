"""Error types shared across the package."""


class AdelicError(Exception):
    """Base class for all package errors."""


class IndeterminateCancellation(AdelicError):
    """Raised when an arithmetic result cannot be determined at the stored
    digit depth.

    Truncated p-adic representations know a value only modulo p^k for some
    k. When a sum or difference cancels past that modulus the valuation of
    the result is undecidable; callers must handle this explicitly (resample,
    increase depth, or abort) - the library never rounds silently.
    """


class ToleranceError(AdelicError):
    """Raised when a requested certified tolerance cannot be met."""
