"""Exception types shared across the package."""


class PseudoprobError(Exception):
    """Base class for all errors raised by this package."""


class NotHermitian(PseudoprobError):
    pass


class DimensionMismatch(PseudoprobError):
    pass


class NotProjector(PseudoprobError):
    pass


class NotUnit(PseudoprobError):
    pass


class NotOrthonormal(PseudoprobError):
    pass


class BadRank(PseudoprobError):
    pass


class BadWeights(PseudoprobError):
    pass


class UnknownLabel(PseudoprobError):
    pass


class UnsupportedShape(PseudoprobError):
    pass


class SubsystemMismatch(PseudoprobError):
    pass


class BadFrames(PseudoprobError):
    pass


class BadGeometry(PseudoprobError):
    pass


class Unphysical(PseudoprobError):
    pass


class ResolutionTooFine(PseudoprobError):
    pass
