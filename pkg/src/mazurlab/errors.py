"""Exception hierarchy shared by every module."""


class MazurlabError(Exception):
    """Base class for all library errors."""


class NumericalError(MazurlabError):
    """A numerical routine could not produce a trustworthy answer."""


class NotHermitian(MazurlabError, ValueError):
    pass


class NotPositive(MazurlabError, ValueError):
    pass


class DomainError(MazurlabError, ValueError):
    pass


class ShapeMismatch(MazurlabError, ValueError):
    pass


class ExponentMismatch(MazurlabError, ValueError):
    pass


class NotNormalized(MazurlabError, ValueError):
    pass


class DegeneratePair(MazurlabError, ValueError):
    pass


class NoConvergence(NumericalError):
    pass


class IllConditioned(NumericalError):
    pass
