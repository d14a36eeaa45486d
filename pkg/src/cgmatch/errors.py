"""Exception hierarchy shared by the library, the CLI, and the service.

Every public error carries a stable machine-readable ``code`` and the CLI
exit status it maps to.  Exit status 2 is reserved for argument-parsing
errors (argparse), so domain errors start at 3.
"""

from __future__ import annotations


class CgmatchError(Exception):
    """Base class for all errors raised by this package."""

    code = "internal"
    exit_code = 1


class ParameterError(CgmatchError, ValueError):
    """A model or algorithm parameter is outside its legal domain."""

    code = "parameter-domain"
    exit_code = 3


class CapacityError(CgmatchError):
    """An exhaustive-mode request exceeds the instance-size guard."""

    code = "capacity"
    exit_code = 4


class ModeError(CgmatchError):
    """The requested estimator mode cannot run on the given input."""

    code = "mode"
    exit_code = 5


class InputError(CgmatchError, ValueError):
    """Malformed input data: shape mismatch, non-finite entries, bad index."""

    code = "input"
    exit_code = 6


class DegenerateRatioError(CgmatchError):
    """A posterior ratio is undefined because an edge probability is zero."""

    code = "degenerate-ratio"
    exit_code = 7


class InfeasibleCompletionError(CgmatchError):
    """Leftover vertices cannot be matched (no feature information)."""

    code = "infeasible-completion"
    exit_code = 8


class ConfigurationError(CgmatchError):
    """A sweep or cell configuration is invalid before any trial runs."""

    code = "configuration"
    exit_code = 9


class OutputError(CgmatchError, OSError):
    """An output file could not be written."""

    code = "io"
    exit_code = 10
