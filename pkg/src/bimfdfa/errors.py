"""Exception hierarchy.

Every error raised by the library derives from ``MultifractalError`` (itself a
``ValueError``) so callers can catch one type at the boundary.
"""


class MultifractalError(ValueError):
    pass


# input data
class TooShortError(MultifractalError):
    pass


class NonPositivePriceError(MultifractalError):
    pass


class NonFiniteValueError(MultifractalError):
    pass


class ZeroVarianceError(MultifractalError):
    pass


# segmentation
class ScaleTooLargeError(MultifractalError):
    pass


class ScaleTooSmallError(MultifractalError):
    pass


class BadOverlapError(MultifractalError):
    pass


# fluctuation
class WindowTooShortError(MultifractalError):
    pass


class ZeroVarianceWithNegativeQError(MultifractalError):
    pass


class EmptyWindowsError(MultifractalError):
    pass


# scaling
class TooFewScalesError(MultifractalError):
    pass


class FlaggedColumnInRangeError(MultifractalError):
    pass


class GridTooSmallError(MultifractalError):
    pass


# synth
class BadSpecError(MultifractalError):
    pass


class BadPError(BadSpecError):
    pass


# cli
class ParseError(MultifractalError):
    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class UnknownViewError(MultifractalError):
    pass
