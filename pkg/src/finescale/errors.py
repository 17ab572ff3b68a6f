"""Guard and validation exceptions shared across the package.

Every exception below maps to CLI exit code 2 (numeric/capacity guard).
Usage problems are argparse's job (exit 1); failed verifications are
reported through verdicts and exit code 3, not exceptions.
"""


class FinescaleError(Exception):
    """Base class for all guard and validation failures."""


class InvalidSpec(FinescaleError):
    """A sequence spec violates its structural invariants."""


class NotIncreasing(FinescaleError):
    """Materialized values are not strictly increasing."""


class MagnitudeGuard(FinescaleError):
    """A value exceeds the 2^45 precision cap."""


class NonPositiveValue(FinescaleError):
    """Ratio test requires strictly positive values."""


class TooShort(FinescaleError):
    """Convexity needs at least three values."""


class WindowTooWide(FinescaleError):
    """Pair-correlation window s/N^r must stay below 1/2."""


class CapacityGuard(FinescaleError):
    """Requested computation exceeds a configured memory cap."""


class TooLarge(FinescaleError):
    """Brute-force oracle restricted to small instances."""


class BudgetExceeded(FinescaleError):
    """Requested computation exceeds a configured probe budget."""


class ZeroDifference(FinescaleError):
    """A pair difference of distinct indices evaluated to zero."""


class DegenerateWindow(FinescaleError):
    """Interval half-width must lie in (0, 1/2)."""


class InvalidDegree(FinescaleError):
    """Polynomial degree must be at least 1."""


class MismatchedWindows(FinescaleError):
    """Majorant/minorant pair must share the same window."""


class TooFewPoints(FinescaleError):
    """Exponent fitting needs at least four grid points."""


class NonPositiveCount(FinescaleError):
    """Log-log fitting needs strictly positive counts."""


class InvalidR(FinescaleError):
    """Threshold formula is defined for r >= 2 only."""
