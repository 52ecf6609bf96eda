"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class CuspEdgeError(Exception):
    """Base class for every error raised by this package."""


# -- expressions -------------------------------------------------------------


class ExprError(CuspEdgeError, ValueError):
    """Malformed coordinate expression."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class ExprSyntaxError(ExprError):
    pass


class UnknownIdentifierError(ExprError):
    pass


class ArityError(ExprError):
    pass


class EvalDomainError(CuspEdgeError, ArithmeticError):
    """A function was applied outside its natural domain."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (node at position {position})"
        super().__init__(message)


# -- jets --------------------------------------------------------------------


class JetError(CuspEdgeError):
    pass


class JetOrderError(JetError, ValueError):
    pass


class JetBaseMismatch(JetError, ValueError):
    pass


class AxisVanishingError(JetError, ValueError):
    """A jet expected to vanish on the v = 0 axis does not."""

    def __init__(self, max_coefficient: float, tolerance: float):
        self.max_coefficient = max_coefficient
        super().__init__(
            f"jet does not vanish on the axis: max |c_i0| = {max_coefficient:.3e} "
            f"> {tolerance:.1e}"
        )


# -- geometry ----------------------------------------------------------------


class GeometryError(CuspEdgeError):
    pass


class SingularPointError(GeometryError):
    """Regular-point construction requested at a singular point."""


class DegenerateFrameError(GeometryError):
    pass


class CorankTwoError(GeometryError):
    pass


class NotCuspidalEdgeError(GeometryError):
    pass


class ChartError(GeometryError):
    pass


class TraceError(GeometryError):
    pass


class UnboundedCurvatureError(GeometryError):
    """Gaussian curvature is unbounded near the singular curve."""


class DegenerateGaussMapError(GeometryError):
    pass


class NotSingularCurvePointError(GeometryError):
    pass


class UnsupportedClassification(GeometryError):
    pass


# -- files -------------------------------------------------------------------


class SurfaceFileError(CuspEdgeError, ValueError):
    def __init__(self, message: str, path: str | None = None,
                 line: int | None = None, column: int | None = None):
        self.path, self.line, self.column = path, line, column
        loc = ""
        if path is not None:
            loc = str(path)
        if line is not None:
            loc += f":{line}"
            if column is not None:
                loc += f":{column}"
        super().__init__(f"{loc}: {message}" if loc else message)
