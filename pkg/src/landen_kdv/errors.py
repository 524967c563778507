"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation.

    Raised for modulus parameters outside [0, 1], non-finite inputs,
    non-positive scale factors and similar unrecoverable argument errors.
    """


class ConsistencyError(ArithmeticError):
    """An internal cross-check between two independent computations failed.

    This signals a numerical inconsistency (e.g. a quantity that must be
    constant varies beyond tolerance), not bad user input.
    """


class PeriodMismatchError(ValueError):
    """A sampled field is not periodic on the requested grid."""


class InstabilityError(RuntimeError):
    """A time integration blew up (spectral amplitudes diverged)."""


class AliasingWarning(UserWarning):
    """High wavenumbers carry enough energy that spectral products alias."""
