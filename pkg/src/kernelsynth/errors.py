"""Exception hierarchy.

Every exception carries a short ``kind`` string so the command line driver
can report it without losing the category.
"""


class KernelSynthError(Exception):
    kind = "error"


class ArgumentError(KernelSynthError, ValueError):
    """Malformed or inconsistent arguments (length mismatches, bad JSON...)."""

    kind = "argument_error"


class DomainError(KernelSynthError, ValueError):
    """A value lies outside the mathematical domain of an operation."""

    kind = "domain_error"


class EvaluationError(KernelSynthError, ArithmeticError):
    """A function produced a non-finite value at a specific node or pair."""

    kind = "evaluation_error"


class DegenerateNodeError(KernelSynthError, ArithmeticError):
    kind = "degenerate_node"


class ConditioningError(KernelSynthError, ArithmeticError):
    """Factorization failed even after the jitter ladder was exhausted."""

    kind = "conditioning_error"

    def __init__(self, message, condition_estimate=None):
        super().__init__(message)
        self.condition_estimate = condition_estimate


class NumericalFailure(KernelSynthError, ArithmeticError):
    kind = "numerical_failure"


class InvariantViolation(KernelSynthError, AssertionError):
    """A mathematical guarantee failed; ``report`` holds the diagnostics."""

    kind = "invariant_violation"

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
