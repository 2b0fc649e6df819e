"""
Exception hierarchy for flat-voltage power flow analysis
"""

from typing import Optional


class FlowError(Exception):
    """Base class for all flat-voltage analysis errors"""


class DomainError(FlowError, ValueError):
    """Argument outside the domain of an operation (x <= 0, p < 0, μ out of range, ...)"""


class InfeasibleFlowError(FlowError):
    """No flat-voltage solution exists for the requested flow"""

    def __init__(self, message: str, context: Optional[str] = None):
        self.context = context
        if context:
            message = f"{context}: {message}"
        super().__init__(message)


class ConsistencyError(FlowError, ArithmeticError):
    """Internal numeric inconsistency (e.g. |μ| well above 1, bisection not converging)"""
