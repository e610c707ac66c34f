"""Exception hierarchy shared by the library and the command line.

The CLI maps each class to an exit code, so library code raises the most
specific class that applies.
"""


class VecBKKError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class InputError(VecBKKError, ValueError):
    """Malformed or inconsistent input (parse errors, bad shapes, unknown labels)."""

    exit_code = 1


class PreconditionError(VecBKKError, ValueError):
    """Input is well formed but violates a mathematical precondition."""

    exit_code = 2


class GenericityError(VecBKKError, RuntimeError):
    """A seeded search for a generic object exhausted its retry budget."""

    exit_code = 3
