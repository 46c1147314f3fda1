"""Exception hierarchy shared by all oddu modules."""


class OdduError(Exception):
    """Base class for all errors raised by this package."""


class ModulusTooSmall(OdduError):
    pass


class NotPseudoinvolution(OdduError):
    pass


class NotAUnit(OdduError):
    pass


class DimensionMismatch(OdduError):
    pass


class GeneratorNotInLmax(OdduError):
    pass


class NotInvertible(OdduError):
    pass


class SpaceTooLarge(OdduError):
    pass


class PreconditionViolated(OdduError):
    pass


class InvalidIndices(OdduError):
    pass


class PayloadNotInFormParameter(OdduError):
    pass


class NotUnitary(OdduError):
    pass


class WrongRank(OdduError):
    pass


class PayloadUnavailable(OdduError):
    pass


class ConfigError(OdduError):
    pass


class ExtractionError(OdduError):
    """A constructive decomposition failed an internal solvability step."""
