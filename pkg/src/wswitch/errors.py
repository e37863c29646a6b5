"""Exception hierarchy shared by all modules."""


class WSError(ValueError):
    """Base class for every error raised by this package."""


class NotTwoConnected(WSError):
    pass


class TooLarge(WSError):
    pass


class TooSmall(WSError):
    pass


class BadNode(WSError):
    pass


class SizeMismatch(WSError):
    pass


class NoIsomorphism(WSError):
    pass


class InvalidMove(WSError):
    pass


class IndexOutOfRange(WSError):
    pass


class NotOrdered(WSError):
    pass


class InternalInconsistency(WSError):
    pass


class NoPartner(WSError):
    pass


class GenerationFailed(WSError):
    pass


class ParseError(WSError):
    """Malformed instance bytes; ``where`` names the line or field."""

    def __init__(self, message: str, where: str = ""):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


class ValidationError(WSError):
    """Well-formed input that violates an invariant; ``invariant`` names it."""

    def __init__(self, invariant: str, detail: str = ""):
        self.invariant = invariant
        super().__init__(f"{invariant}: {detail}" if detail else invariant)
