"""Exception hierarchy shared by every module."""


class CubeSpectraError(Exception):
    """Base class for all library errors."""


class InputError(CubeSpectraError, ValueError):
    """Malformed or unsupported input (bad rational, wrong shape, ...)."""


class DimensionMismatch(InputError):
    pass


class SingularLattice(InputError):
    pass


class UnsupportedDimension(InputError):
    pass


class InvalidForm(InputError):
    """A catalog form violates its own invariants."""


class BudgetExceeded(CubeSpectraError):
    """A computation would exceed the configured work cap."""

    def __init__(self, what: str, needed: int, cap: int):
        super().__init__(f"{what}: {needed} exceeds work cap {cap}")
        self.needed = needed
        self.cap = cap


class NotSpectral(CubeSpectraError):
    pass


class GroupMismatch(InputError):
    pass


class ZeroFunction(InputError):
    pass


class NotSpectralPair(CubeSpectraError):
    pass


class NonIntegerDensityWarning(UserWarning):
    """|det R| is not an integer, so it can never equal the offset count."""
