"""Exception hierarchy shared by all modules."""


class TotalRepError(Exception):
    pass


class ValidationError(TotalRepError, ValueError):
    pass


class CycleDetected(ValidationError):
    pass


class MultipleParents(ValidationError):
    pass


class LabelOutOfRange(ValidationError):
    pass


class EmptyForest(ValidationError):
    pass


class LabelCountMismatch(ValidationError):
    pass


class NotAPermutation(ValidationError):
    pass


class LabelingNotBijective(ValidationError):
    pass


class InvalidMorphism(ValidationError):
    pass


class EmptyList(ValidationError):
    pass


class IndexOutOfRange(ValidationError):
    pass


class ShapeMismatch(ValidationError):
    pass


class ParseError(TotalRepError, SyntaxError, ValueError):
    """Malformed text input; ``pos`` is a character offset or line number.

    Subclasses both SyntaxError and ValueError so callers can catch either.
    """

    def __init__(self, message, pos=None):
        if pos is not None:
            message = f"{message} (at {pos})"
        super().__init__(message)
        self.pos = pos


class TheoremViolation(TotalRepError, AssertionError):
    """Two independently computed sides of an equivalence disagree.

    Never expected; raised to surface an implementation bug.
    """
