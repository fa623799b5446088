"""Exception types raised by the library."""


class SchifferError(Exception):
    pass


class NonConvergent(SchifferError):
    pass


class SingularEvaluation(SchifferError):
    pass


class InvalidOrder(SchifferError):
    pass


class InvalidEps(SchifferError):
    pass


class LengthMismatch(SchifferError):
    pass


class DomainMismatch(SchifferError):
    pass


class RegionMismatch(SchifferError):
    pass


class DegenerateGram(SchifferError):
    pass


class TargetMembership(SchifferError):
    pass


class QuadratureOverflow(SchifferError):
    pass


class InversionFailure(SchifferError):
    pass


class NestingViolation(SchifferError):
    pass


class IllConditionedFit(SchifferError):
    pass


class NotExact(SchifferError):
    pass


class PointOnCurve(SchifferError):
    pass


class LimitNotSettled(SchifferError):
    pass


class NotInW(SchifferError):
    pass


class FitResidualExceeded(SchifferError):
    pass


class ConfigInvalid(SchifferError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations) or "invalid config")
