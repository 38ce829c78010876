"""
Exception hierarchy.

Every error carries the process exit code the command-line workbench uses:
1 = bad input, 2 = axiom / precondition failure, 3 = internal consistency,
4 = a proven identity failed (a math bug, never expected to fire).
"""

from typing import Optional


class QuantumGroupError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 3


# Exit code 1: input could not be read as a quantum group


class DefinitionParseError(QuantumGroupError):
    """A definition, covector, hull or action document failed to parse."""

    exit_code = 1

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MalformedDefinitionError(QuantumGroupError):
    """A structure tensor has the wrong shape or holds NaN/Inf."""

    exit_code = 1

    def __init__(self, tensor: str, message: str):
        self.tensor = tensor
        super().__init__(f"{tensor}: {message}")


class NotAGroupError(QuantumGroupError):
    """A multiplication table is not a group table."""

    exit_code = 1

    def __init__(self, message: str, triple: Optional[tuple] = None):
        self.triple = triple
        super().__init__(message)


# Exit code 2: structure present but axioms or preconditions fail


class AxiomFailureError(QuantumGroupError):
    exit_code = 2

    def __init__(self, report):
        self.report = report
        names = ", ".join(report.failures) or "unknown"
        super().__init__(f"{report.name}: axioms failed ({names})")


class ActionInvariantError(QuantumGroupError):
    exit_code = 2

    def __init__(self, invariant: str, residual: float):
        self.invariant = invariant
        self.residual = residual
        super().__init__(f"action is not a Hopf *-action: {invariant} (residual {residual:.3e})")


class PreconditionError(QuantumGroupError):
    exit_code = 2


class NotALeftIdealError(PreconditionError):
    pass


class NotTwoSidedError(PreconditionError):
    pass


class InvalidIdempotentError(PreconditionError):
    pass


class OwnerMismatchError(PreconditionError):
    pass


class AmbientMismatchError(PreconditionError):
    pass


class ContractViolationError(PreconditionError):
    pass


# Exit code 3: numerical or internal inconsistency


class NoSolutionError(QuantumGroupError):
    exit_code = 3

    def __init__(self, residual: float, scale: float):
        self.residual = residual
        self.scale = scale
        super().__init__(f"inconsistent linear system (residual {residual:.3e}, scale {scale:.3e})")


class InternalConsistencyError(QuantumGroupError):
    exit_code = 3

    def __init__(self, message: str, residuals: Optional[dict] = None):
        self.residuals = residuals or {}
        super().__init__(message)


class DegenerateSpectrumError(InternalConsistencyError):
    """A random element had colliding eigenvalues; retry with another seed."""


# Exit code 4


class TheoremViolationError(QuantumGroupError):
    exit_code = 4
