"""Exception hierarchy shared by every module of the package."""


class HelixError(Exception):
    """Base class for all analysis and synthesis failures."""


class DegenerateFrameError(HelixError):
    """Gram-Schmidt met a (nearly) null intermediate vector."""

    def __init__(self, message, node=None, step=None):
        super().__init__(message)
        self.node = node
        self.step = step


class VanishingCurvatureError(DegenerateFrameError):
    """A curvature function is zero (below the floor) at some node.

    ``index`` is 1, 2 or 3 for kappa1, kappa2, kappa3.
    """

    def __init__(self, message, node=None, index=None):
        super().__init__(message, node=node, step=index)
        self.index = index


class NotTimelikeError(HelixError):
    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class NotUnitSpeedError(HelixError):
    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class GridTooCoarseError(HelixError):
    pass


class IllConditionedFitError(HelixError):
    pass


class SignChangeError(HelixError):
    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class NotSlantError(HelixError):
    pass


class ParameterError(HelixError, ValueError):
    pass


class ExpressionError(HelixError):
    """Evaluation of a curvature expression failed or produced non-finite values."""


class ParseError(HelixError):
    """Syntax error in an expression; ``offset`` is a byte offset into the source."""

    def __init__(self, offset, expected, text=""):
        self.offset = offset
        self.expected = frozenset(expected)
        self.text = text
        want = ", ".join(sorted(self.expected))
        super().__init__(f"parse error at offset {offset}: expected one of {want}")
