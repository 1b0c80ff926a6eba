"""Exception types raised by the library."""


class CutProjectError(Exception):
    """Base class for all library errors."""


class InvalidInterval(CutProjectError, ValueError):
    pass


class SingularLattice(CutProjectError, ValueError):
    pass


class InvalidSmoothing(CutProjectError, ValueError):
    pass


class NoTailBound(CutProjectError, ValueError):
    """Neither factor of a lattice sum decays fast enough to bound the tail."""


class NotUniformlyDiscrete(CutProjectError, ValueError):
    pass


class DuplicateNode(CutProjectError, ValueError):
    pass


class TooLarge(CutProjectError, ValueError):
    pass


class QuadratureError(CutProjectError, ArithmeticError):
    pass


class ConfigError(CutProjectError, ValueError):
    pass
