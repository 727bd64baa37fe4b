"""Exception types. Class names double as the error codes used in reports."""


class LogtcError(Exception):
    """Base class for every error raised by the library."""

    @property
    def code(self):
        return type(self).__name__


class ZeroVector(LogtcError):
    pass


class ConeNotInFan(LogtcError):
    pass


class RankUnsupported(LogtcError):
    pass


class NotCompleteRank2(LogtcError):
    pass


class NonAdjacentRays(LogtcError):
    pass


class InvalidFan(LogtcError):
    pass


class MonomialUnsupported(LogtcError):
    pass


class FanMismatch(LogtcError):
    pass


class NotAFace(LogtcError):
    pass


class NotPiecewiseLinear(LogtcError):
    pass


class NotPointed(LogtcError):
    pass


class SchemaError(LogtcError):
    def __init__(self, path, message=""):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}" if message else path)


class FanSheafError(LogtcError):
    pass


class NotAComplex(LogtcError):
    """Raised for malformed polyhedral complexes and for chain maps with d*d != 0."""


class NoSuchStratum(LogtcError):
    pass


class NotInCone(LogtcError):
    pass


class NonRestrictableChoice(LogtcError):
    pass


class BadJointFan(LogtcError):
    pass


class SectionVanishesOnJoint(LogtcError):
    pass


class FactorizationUnsupported(LogtcError):
    pass


class InconsistentSection(LogtcError):
    def __init__(self, message, residuals=None):
        self.residuals = residuals
        super().__init__(message)


class CenterNotInSection(LogtcError):
    pass


class NotSmooth(LogtcError):
    pass
