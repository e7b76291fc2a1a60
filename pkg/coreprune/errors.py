"""Exception hierarchy shared by every coreprune module.

Two families map onto CLI exit codes: :class:`InputError` (bad files, flags,
shapes or parameters, exit 2) and :class:`NumericalError` (the numerics
could not deliver their guarantee, exit 3).
"""
from __future__ import annotations


class CorePruneError(Exception):
    """Base class for all coreprune errors."""

    exit_code: int = 1


# =============================================================================
# INPUT ERRORS (exit 2)
# =============================================================================

class InputError(CorePruneError, ValueError):
    """The caller handed us something malformed."""

    exit_code = 2


class DimensionMismatch(InputError):
    pass


class InvalidParameter(InputError):
    pass


class InvalidSampleSize(InvalidParameter):
    pass


class BadMagic(InputError):
    pass


class UnsupportedDtype(InputError):
    pass


class TruncatedPayload(InputError):
    pass


class ManifestError(InputError):
    """Network manifest is missing fields, files, or chains badly."""


class AllQueriesDegenerate(InputError):
    """Every query had a (numerically) zero denominator."""


class NoValidQuery(InputError):
    """No sampled query had a nonempty positive side."""


# =============================================================================
# NUMERICAL ERRORS (exit 3)
# =============================================================================

class NumericalError(CorePruneError, ArithmeticError):
    """A numerical routine failed to certify its result."""

    exit_code = 3


class AllPointsIdentical(NumericalError):
    """Centered point matrix is numerically zero (affine rank 0)."""


class DegenerateInput(NumericalError):
    pass


class NoConvergence(NumericalError):
    pass


class NotPositiveDefinite(NumericalError):
    pass


class Infeasible(NumericalError):
    """Target point is not in the convex hull within tolerance."""


class NumericalBreakdown(NumericalError):
    pass


__all__ = [
    "CorePruneError",
    "InputError",
    "DimensionMismatch",
    "InvalidParameter",
    "InvalidSampleSize",
    "BadMagic",
    "UnsupportedDtype",
    "TruncatedPayload",
    "ManifestError",
    "AllQueriesDegenerate",
    "NoValidQuery",
    "NumericalError",
    "AllPointsIdentical",
    "DegenerateInput",
    "NoConvergence",
    "NotPositiveDefinite",
    "Infeasible",
    "NumericalBreakdown",
]
