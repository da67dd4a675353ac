"""Exception hierarchy.

Every error carries a stable ``code`` used by the CLI for exit-code mapping
and machine-readable reports.
"""


class IrrHodgeError(Exception):
    code = "E_INTERNAL"


class ShapeError(IrrHodgeError):
    code = "E_SHAPE"


class ParseError(IrrHodgeError):
    code = "E_PARSE"


class CycleError(ParseError):
    code = "E_CYCLE"


class BadAlphaError(IrrHodgeError):
    code = "E_BAD_ALPHA"


class BadFiltrationError(IrrHodgeError):
    code = "E_BAD_FILTRATION"


class NotUnitError(IrrHodgeError):
    code = "E_NOT_UNIT"


class NotLogarithmicError(IrrHodgeError):
    code = "E_NOT_LOG"


class IrregularSingularityError(IrrHodgeError):
    code = "E_IRREGULAR"


class IrrationalExponentError(IrrHodgeError):
    code = "E_IRRATIONAL_EXPONENT"


class NoStabilizeError(IrrHodgeError):
    code = "E_NO_STABILIZE"


class VAdaptError(IrrHodgeError):
    code = "E_VADAPT_FAIL"


class WindowError(IrrHodgeError):
    code = "E_WINDOW"
