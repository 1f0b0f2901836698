"""Exception types raised across the package."""


class CatSimError(Exception):
    """Base class for all catnet errors."""


class ZeroNormError(CatSimError, ValueError):
    """A state's squared norm fell below the degeneracy threshold."""


class ModeError(CatSimError, ValueError):
    """Mode index out of range, duplicated, or mode counts that do not match."""


class NonUnitaryError(CatSimError, ValueError):
    pass


class TailMassExceeded(CatSimError, ArithmeticError):
    """A truncated photon-number expansion leaked more probability than allowed."""


class InvalidMError(CatSimError, ValueError):
    pass


class MemoryBudgetExceeded(CatSimError, MemoryError):
    """A dense Fock vector would exceed the configured entry budget."""
