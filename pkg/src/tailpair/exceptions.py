"""Exception hierarchy shared across the package.

Validation/configuration problems map to CLI exit code 2, numerical or
data-driven degeneracies to exit code 3 (see cli.py).
"""


class TailpairError(Exception):
    """Base class for all package errors."""


class ConfigurationError(TailpairError, ValueError):
    """Invalid tail configuration (k out of range, bad parameters)."""


class DataValidationError(TailpairError, ValueError):
    """Malformed or inconsistent input data (CSV parsing, sample checks)."""


class DomainError(TailpairError, ValueError):
    """Estimator argument outside its admissible range."""


class InsufficientExceedancesError(TailpairError, RuntimeError):
    """Too few tail exceedances in a (sub)sample to form an estimate."""


class DegenerateDependenceError(TailpairError, RuntimeError):
    """Tail dependence estimate degenerate (no joint exceedances, or a
    nonpositive variance proxy), so the requested test is unavailable."""


class NumericalError(TailpairError, RuntimeError):
    """A numerical routine (quadrature, series) failed to converge."""
