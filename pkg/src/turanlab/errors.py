"""Exception hierarchy shared by all turanlab modules."""


class TuranLabError(Exception):
    """Base class for every error raised by turanlab."""


class EmptyRoots(TuranLabError, ValueError):
    pass


class RootOutOfClass(TuranLabError, ValueError):
    """A root lies outside the admissible zero region by more than the snap tolerance."""


class DomainError(TuranLabError, ValueError):
    """A constant or special function was evaluated outside its domain."""


class ParamOutOfRange(TuranLabError, ValueError):
    pass


class ClassMismatch(TuranLabError, ValueError):
    """Polynomial class tag is not admissible for the requested inequality."""


class QuadratureNoConvergence(TuranLabError, ArithmeticError):
    """Adaptive quadrature hit its depth cap with the error estimate above tolerance."""


class ObjectiveFailure(TuranLabError, RuntimeError):
    pass


class DegenerateInput(TuranLabError, ValueError):
    pass
