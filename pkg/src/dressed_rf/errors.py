"""Exception hierarchy shared by the numerical modules and the CLI."""

from contextlib import contextmanager


class DressedRFError(Exception):
    """Base class for all package errors."""


class NumericalError(DressedRFError, ArithmeticError):
    """A numerical procedure failed; the CLI maps these to exit code 3."""


class NonConvergence(NumericalError):
    """Adaptive refinement exhausted its budget above tolerance."""


class NonFinite(NumericalError):
    """An integrand returned NaN or infinity."""


class TailNotDecayed(NonConvergence):
    """A semi-infinite integrand had not decayed at the truncation point."""


class TableRange(DressedRFError, ValueError):
    """A correlation table was queried outside its sampled range."""


class PeakCountMismatch(DressedRFError):
    """Peak analysis did not find the expected number of clusters."""


class ConfigError(DressedRFError, ValueError):
    """Invalid run configuration; the CLI maps these to exit code 2."""


@contextmanager
def naming(what: str):
    """Prefix any numerical failure raised inside the block with ``what``."""
    try:
        yield
    except NumericalError as exc:
        raise type(exc)(f"{what}: {exc}") from exc
