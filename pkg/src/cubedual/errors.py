"""Exception hierarchy.

Every error names the offending object.  The CLI maps each class to an exit
status: verification counterexamples exit 1, horizon problems exit 2 and
malformed input exits 3.
"""


class CubeDualError(Exception):
    exit_status = 3


class InputError(CubeDualError, ValueError):
    exit_status = 3


class ResourceError(CubeDualError):
    """A configured budget was exceeded; ``progress`` says how far we got."""

    exit_status = 3

    def __init__(self, message, progress=None):
        super().__init__(message)
        self.progress = dict(progress or {})


class HorizonError(CubeDualError):
    """An object left the truncated region (ball, wall family, complex)."""

    exit_status = 2

    def __init__(self, message, escaping=None):
        super().__init__(message)
        self.escaping = escaping


class VerificationError(CubeDualError):
    """A check that should hold failed; ``witness`` is the counterexample."""

    exit_status = 1

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
