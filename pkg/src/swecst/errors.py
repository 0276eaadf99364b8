"""Exception types raised by the solver and the command line front end."""


class SweError(Exception):
    """Base class for all solver errors."""

    exit_code = 1


class ConfigurationError(SweError, ValueError):
    exit_code = 2


class SolverBlowup(SweError, FloatingPointError):
    """Non-finite values appeared in a flux, source or state."""

    exit_code = 3

    def __init__(self, message, cell=None, stage=None):
        super().__init__(message)
        self.cell = cell
        self.stage = stage


class StalledRun(SweError, RuntimeError):
    """Time step collapsed to zero (all-dry domain) or the step budget ran out."""

    exit_code = 4


class InvariantViolation(SweError, AssertionError):
    """A hard invariant (e.g. non-negative mean depth) was broken on entry."""

    exit_code = 5
