"""Exception types shared across the package."""


class RankMetricError(Exception):
    """Base class for all package errors."""


class NonPrime(RankMetricError):
    pass


class TableCapExceeded(RankMetricError):
    pass


class ContextMismatch(RankMetricError):
    pass


class DivisionByZero(RankMetricError):
    pass


class NotInvertible(RankMetricError):
    pass


class BadParams(RankMetricError):
    pass


class NormConditionViolated(BadParams):
    pass


class CongruenceViolated(BadParams):
    pass


class DeltaConstraintViolated(BadParams):
    pass


class NotFound(RankMetricError):
    pass


class ScalarModeMismatch(RankMetricError):
    pass


class BudgetExceeded(RankMetricError):
    def __init__(self, count):
        super().__init__(f"enumeration of {count} items exceeds the budget")
        self.count = count


class NotFqnLinear(RankMetricError):
    pass


class NotMrd(RankMetricError):
    pass


class KTooSmall(RankMetricError):
    pass
