"""Exception hierarchy shared by all lvswitch modules."""


class LVSwitchError(Exception):
    """Base class for every error raised by lvswitch."""


class InputError(LVSwitchError, ValueError):
    """Invalid user-supplied parameters (CLI exit code 2)."""


class NumericalError(LVSwitchError, ArithmeticError):
    """A numerical procedure failed (CLI exit code 3)."""


class NonPositiveParameter(InputError):
    def __init__(self, name, value=None):
        self.name = name
        self.value = value
        super().__init__(f"parameter {name!r} must be positive and finite, got {value!r}")


class DegenerateEnvironment(InputError):
    pass


class NotBothFavorable(InputError):
    pass


class ExponentOutOfRange(InputError):
    pass


class EmptyInterval(InputError):
    pass


class DiracMeasure(InputError):
    pass


class NoConvergence(NumericalError):
    def __init__(self, message, best=None, achieved=None):
        self.best = best
        self.achieved = achieved
        super().__init__(f"{message} (best={best!r}, achieved rel. change={achieved!r})")


class NormalizationFailure(NumericalError):
    pass


class CrossCheckMismatch(NumericalError):
    pass


class IntegratorFailure(NumericalError):
    def __init__(self, message, partial=None):
        self.partial = partial
        super().__init__(message)


class ExtinctFloor(NumericalError):
    pass
