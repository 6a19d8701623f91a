"""Exception hierarchy shared by the estimation modules and the CLI."""


class MobvpaError(Exception):
    """Base class for all package errors."""


class DomainError(MobvpaError, ValueError):
    """An argument lies outside the support of the function."""


class DegenerateDataError(MobvpaError):
    """The data carry no information about at least one parameter."""


class DataFormatError(MobvpaError):
    """An input file could not be parsed or failed validation."""


class ConvergenceError(MobvpaError):
    """An iterative fit stopped before meeting its tolerance.

    The last iterate is kept on ``last`` so callers can inspect it.
    """

    def __init__(self, message, last=None):
        super().__init__(message)
        self.last = last


class SliceError(MobvpaError):
    """The slice sampler exhausted its shrinkage budget."""
