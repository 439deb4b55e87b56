"""Exception hierarchy.

Three top-level families map onto the CLI exit codes: parameter/contract
problems (exit 2), capacity refusals (exit 3), and numerical failures
(exit 4).
"""


class SpinDistillError(Exception):
    """Base class for all package errors."""


class ParameterError(SpinDistillError, ValueError):
    """Invalid physical parameters, malformed config, or contract violation."""


class BasisMismatchError(ParameterError):
    """Operand expressed in a different basis than the operator expects."""


class UndefinedObservableError(ParameterError):
    """Observable has no meaning for the given model (e.g. bath size 0)."""


class CapacityError(SpinDistillError):
    """Requested problem size exceeds the configured memory/cpu budget."""


class NumericalError(SpinDistillError):
    """A numerical procedure failed to meet its advertised tolerance."""


class DiagonalizationError(NumericalError):
    """Joint eigenbasis left an off-diagonal residual above tolerance."""


class DegenerateFixedPointError(NumericalError):
    """The unit eigenvalue of the one-period map is degenerate."""


class PositivityError(NumericalError):
    """A density matrix has a negative eigenvalue beyond tolerance."""


class NonConvergentModeError(NumericalError):
    """A significantly populated mode has |lambda| too close to 1 to decay."""


class RegimeViolationError(NumericalError):
    """Residual trion occupation shows the decayed-trion regime is violated."""
