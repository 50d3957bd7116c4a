"""Exception types raised across the package."""


class Singular(ArithmeticError):
    """A matrix that must be nondegenerate has a vanishing pivot."""


class SingularAssembly(Singular):
    """The assembled normal-space Gram matrix (or its c^{rs} block) is degenerate."""


class DimensionMismatch(ValueError):
    pass


class BadVariableSupport(ValueError):
    """A polynomial depends on a variable it is not allowed to use."""


class UnknownBuiltin(KeyError):
    pass


class StepTooLarge(RuntimeError):
    """Frame Gram drift exceeded the abort threshold during integration."""

    def __init__(self, message, point=None, drift=None):
        super().__init__(message)
        self.point = point
        self.drift = drift


class GridTooCoarse(ValueError):
    pass


class ConfigError(ValueError):
    """Invalid job configuration; ``path`` names the offending field."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path


class RangeError(ValueError):
    pass
