"""Exception types shared across the package.

Every error names the violated requirement and carries the offending
residual or value in its message, so callers can log a decision trail
without re-deriving anything.
"""


class UnifeasError(Exception):
    """Base class for all package-specific errors."""


class NotHermitian(UnifeasError):
    pass


class NotTraceOne(UnifeasError):
    pass


class NotPositive(UnifeasError):
    pass


class NotUnitary(UnifeasError):
    pass


class NotUnit(UnifeasError):
    """A direction vector is not normalized."""


class TraceMismatch(UnifeasError):
    pass


class DimensionMismatch(UnifeasError):
    pass


class DegenerateInputSpan(UnifeasError):
    """Input states span too small an operator system for this code path."""


class NotCPTP(UnifeasError):
    pass


class OutOfRange(UnifeasError):
    pass


class RejectionExhausted(UnifeasError):
    """Rejection sampling hit its draw cap without an accepted sample."""


class InfeasibleInstance(UnifeasError):
    """Synthesis was asked for a channel that provably does not exist.

    Carries the infeasible `Decision` so callers can inspect the witness.
    """

    def __init__(self, decision):
        self.decision = decision
        super().__init__(f"no unital channel exists: {decision.witness}")
