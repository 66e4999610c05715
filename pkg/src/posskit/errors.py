"""Exception types shared across the package."""


class PosskitError(Exception):
    """Base class for all library errors."""


class InputError(PosskitError, ValueError):
    """Malformed or inconsistent input (bad index, broken invariant, parse failure)."""


class CapExceeded(PosskitError):
    """An exhaustive enumeration would exceed its configured size cap."""
