"""Exception hierarchy.

Every domain failure derives from :class:`HardyError`; the CLI maps these to
exit code 3.
"""


class HardyError(Exception):
    pass


class DegenerateMap(HardyError):
    pass


class ConstantMap(HardyError):
    pass


class IdentityMap(HardyError):
    pass


class NotSelfmap(HardyError):
    pass


class NotAutomorphism(HardyError):
    pass


class NotUnimodular(HardyError):
    pass


class PointNotInDisc(HardyError):
    pass


class InvalidTranslation(HardyError):
    pass


class InvalidParameters(HardyError):
    pass


class DeltaTooLarge(HardyError):
    pass


class PoleInClosedDisc(HardyError):
    pass


class CompositionDiverges(HardyError):
    pass


class InsufficientQuadrature(HardyError):
    pass


class UnboundedWeight(HardyError):
    pass


class NoInteriorFixedPoint(HardyError):
    pass


class NotCertifiedNormal(HardyError):
    pass


class NumericalBreakdown(HardyError):
    pass


class EmptySet(HardyError):
    pass


class TruncationInsufficient(HardyError):
    pass
