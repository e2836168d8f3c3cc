"""Exception hierarchy shared across the package.

ParameterError covers every rejected input (bad sizes, malformed specs);
UnsupportedSizeError marks inputs that are well formed but beyond the
implemented caps.  InfeasibleError marks tasks that are impossible for the
given scheme rather than malformed.  The command line maps ParameterError
(and subclasses) to exit code 2 and InfeasibleError to exit code 3.
"""


class ParameterError(ValueError):
    """An input value is outside the supported domain."""


class UnsupportedSizeError(ParameterError):
    """The input is valid but larger than the implemented cap."""


class InfeasibleError(RuntimeError):
    """The requested construction does not exist for this input."""

    def __init__(self, message, server=None):
        super().__init__(message)
        self.server = server


class InternalConsistencyError(AssertionError):
    """A self-check inside a construction failed (indicates a bug)."""
