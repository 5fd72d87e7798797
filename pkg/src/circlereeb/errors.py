"""Exception hierarchy shared by every module of the package."""


class CircleReebError(Exception):
    """Base class for all errors raised by circlereeb."""


class IdenticalCircles(CircleReebError):
    pass


class PointNotOnCircles(CircleReebError):
    pass


class GenericityViolation(CircleReebError):
    pass


class InvalidRegion(CircleReebError):
    pass


class PointOutsideRegion(CircleReebError):
    pass


class NotATree(CircleReebError):
    pass


class ParseError(CircleReebError):
    pass


# operation search failures
class OperationError(CircleReebError):
    pass


class NoCandidatePoint(OperationError):
    pass


class NoCandidatePair(OperationError):
    pass


class SearchBudgetExceeded(OperationError):
    pass


class WindowUnsatisfiable(OperationError):
    pass


class CaseInapplicable(OperationError):
    pass


class ArcPairNotFound(OperationError):
    pass


class ReplayDivergence(CircleReebError):
    pass


# grammar / planner
class InvalidParams(CircleReebError):
    pass


class BudgetExceeded(CircleReebError):
    pass


class NotInFamily(CircleReebError):
    pass


class GeometricSearchFailed(CircleReebError):
    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class VerificationFailed(CircleReebError):
    pass


class InvalidSpec(CircleReebError):
    pass
