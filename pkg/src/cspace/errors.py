"""Exception hierarchy for the computon-space engine."""


class CspaceError(Exception):
    """Base class for every error raised by :mod:`cspace`."""


class ConstructionError(CspaceError):
    """A composition operator was applied to unacceptable operands."""


class TooFewDistinctOperands(ConstructionError):
    pass


class EmptyOperand(ConstructionError):
    pass


class SelfReference(ConstructionError):
    pass


class OrderUndefined(CspaceError):
    pass


class NotAMember(CspaceError):
    pass


class KindMismatch(CspaceError):
    pass


class IllFormedFormula(CspaceError):
    def __init__(self, violations):
        self.violations = list(violations)
        text = "; ".join(str(v) for v in self.violations) or "ill-formed formula"
        super().__init__(text)


class UnsupportedOnEmpty(CspaceError):
    pass


class BudgetZero(CspaceError):
    pass


class BudgetExceeded(CspaceError):
    """A filtered stream consumed its whole per-item allowance without a hit."""

    def __init__(self, consumed, space=None):
        self.consumed = consumed
        self.space = space
        super().__init__(
            f"gave up after {consumed} candidate computons without finding another member"
        )
