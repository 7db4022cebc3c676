"""Typed errors shared across the package.

The CLI maps these onto process exit codes: InputError -> 2,
UnsupportedModeError -> 3, InvariantError -> 4.
"""

from __future__ import annotations


class OkbodyError(Exception):
    """Base class for all errors raised by this package."""


class InputError(OkbodyError):
    """Malformed or mathematically inadmissible input (bad schema, degree
    mismatch, singular flag matrix, divisor outside the effective cone, ...)."""


class TruncationError(InputError):
    """A degree query exceeded the declared truncation bound."""


class UnsupportedModeError(OkbodyError):
    """The input is valid but outside the supported computation mode
    (non-monomial base ideals, plot dimensions above 2, ...)."""


class InvariantError(OkbodyError):
    """An internal cross-check failed.  Indicates a bug, never bad input."""
