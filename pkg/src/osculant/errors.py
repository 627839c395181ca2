"""Exception hierarchy.

Every error raised by the library derives from :class:`OsculantError`. The
``exit_code`` class attribute is what the command line maps the error to:
2 for bad input or violated preconditions, 3 for numerically inconclusive or
degenerate situations.
"""


class OsculantError(Exception):
    exit_code = 3


# -- input / usage ---------------------------------------------------------

class ParseError(OsculantError, ValueError):
    exit_code = 2

    def __init__(self, message, offset, expected=()):
        self.offset = offset
        self.expected = tuple(sorted(set(expected)))
        detail = f"{message} at offset {offset}"
        if self.expected:
            detail += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(detail)


class CurveSpecError(OsculantError, ValueError):
    exit_code = 2


class PreconditionError(OsculantError, ValueError):
    exit_code = 2


class NonpositiveRadius(PreconditionError):
    pass


class NotAnEllipse(PreconditionError):
    pass


class OrderExceeded(OsculantError, IndexError):
    exit_code = 2


# -- evaluation ------------------------------------------------------------

class DomainError(OsculantError, ArithmeticError):
    pass


class DivisionByZeroJet(DomainError, ZeroDivisionError):
    pass


class CriticalPoint(DomainError):
    """f'(t) = 0: no fractional-linear osculant exists."""


class ZeroCurvature(DomainError):
    """The osculating circle degenerates to a line."""


# -- numerical degeneracy --------------------------------------------------

class SingularSystem(OsculantError, ArithmeticError):
    pass


class RankDeficient(OsculantError, ArithmeticError):
    pass


class DegenerateCurve(OsculantError):
    pass


class OpenComponent(OsculantError):
    """The traced component leaves every bounding box tried."""


class SeedOffCurve(OsculantError):
    exit_code = 2


class PoleOverlap(OsculantError):
    pass


class NoisyJet(OsculantError):
    pass


class Inconclusive(OsculantError):
    pass
