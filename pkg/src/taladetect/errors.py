"""Exception hierarchy shared by every analysis stage."""


class TalaError(Exception):
    """Base class for all errors raised by taladetect."""


class UnreadableFile(TalaError):
    pass


class UnsupportedEncoding(TalaError):
    pass


class InvalidBankSpec(TalaError, ValueError):
    pass


class WrongSampleRate(TalaError, ValueError):
    pass


class ClipTooShort(TalaError, ValueError):
    pass


class EmptyPeakSet(TalaError):
    """No candidate peaks in the bayan band, i.e. no percussive low-end content."""


class InsufficientBayanStrokes(TalaError):
    """Fewer than three bayan strokes: no consecutive pulse-count pair exists."""


class SeriesTooShort(TalaError, ValueError):
    pass


class EmptyMatrix(TalaError, ValueError):
    pass


class NoMatchingPairs(TalaError):
    pass


class InvalidSpec(TalaError, ValueError):
    pass
