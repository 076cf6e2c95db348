"""Exception types shared across the package.

Every error carries an ``exit_code`` so the command line can map failures
to the documented codes without inspecting messages.
"""


class MetastableError(Exception):
    exit_code = 1


class InputError(MetastableError, ValueError):
    exit_code = 2


class UnsupportedSizeError(InputError):
    pass


class NumericError(MetastableError, ArithmeticError):
    exit_code = 3


class DegeneratePointError(NumericError):
    pass


class ContinuationError(NumericError):
    def __init__(self, message, last_good_gamma=None):
        super().__init__(message)
        self.last_good_gamma = last_good_gamma


class BlowUpError(NumericError):
    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class InvariantError(MetastableError, AssertionError):
    exit_code = 4
