"""Exception hierarchy shared by the library and the CLI"""


class SlicesumError(Exception):
    """Base class for all slicesum errors"""
    exit_code = 1


class ArgumentError(SlicesumError, ValueError):
    """Invalid argument or violated precondition"""
    exit_code = 2


class DomainError(ArgumentError):
    """Argument outside the mathematical domain of a function"""


class UnsupportedKernelError(ArgumentError):
    """Requested operation is not available for a kernel"""


class InputDataError(SlicesumError, ValueError):
    """Malformed or non-finite input data"""
    exit_code = 3


class NumericalError(SlicesumError, ArithmeticError):
    """Numerical failure (non-finite result, degenerate reference, ...)"""
    exit_code = 4
