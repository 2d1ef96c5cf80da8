"""Exception hierarchy for the findim package.

Every error that can escape the public API is defined here so that the
CLI can map exceptions to stable report codes and exit statuses.
"""

from __future__ import annotations


class FindimError(Exception):
    """Base class for all package errors."""

    code = "error"


# --- algebra construction ---

class NotPrime(FindimError):
    code = "not-prime"


class BadRelation(FindimError):
    """Relation terms are not parallel, too short, or use unknown arrows."""

    code = "bad-relation"


class NotFiniteDimensional(FindimError):
    """No nilpotency degree was found below the length cap."""

    code = "not-finite-dimensional"


# --- module calculus ---

class AlgebraMismatch(FindimError):
    code = "algebra-mismatch"


class NotInjective(FindimError):
    """Quotient was requested along a morphism that is not mono."""

    code = "not-injective"


# --- decomposition ---

class FieldTooSmall(FindimError):
    """p <= dim End(M); the trace-form radical criterion is not valid."""

    code = "field-too-small"


class NonSplit(FindimError):
    """End(M)/rad is a field extension of F_p: the module would split only
    after a base change, which this package refuses to guess."""

    code = "non-split"


class NotIndecomposable(FindimError):
    code = "not-indecomposable"


class SplittingFailed(FindimError):
    """Internal cap: no splitting idempotent was located although End/rad
    is provably not a division algebra."""

    code = "splitting-failed"


class NonSplitWarning(UserWarning):
    """End/rad is a proper field extension: indecomposable over F_p but
    not absolutely indecomposable."""


# --- homological invariants ---

class Undecided(FindimError):
    """A pd/phi/psi computation did not resolve within the depth budget."""

    code = "undecided"


class RadCubeNotZero(FindimError):
    code = "radcube-not-zero"


# --- stratifying systems ---

class NotVerified(FindimError):
    """An operation required a verified stratifying system."""

    code = "not-verified"


class EpssNotConverged(FindimError):
    code = "epss-not-converged"


class ValidationFailed(FindimError):
    code = "validation-failed"


class CoverNotFound(FindimError):
    code = "cover-not-found"


class MissingAssumption(FindimError):
    code = "missing-assumption"


class MissingEpss(FindimError):
    code = "missing-epss"


# --- parsing / CLI ---

class ParseError(FindimError):
    code = "parse-error"

    def __init__(self, message: str, line: int | None = None,
                 column: int | None = None, expected: str | None = None):
        super().__init__(message)
        self.line = line
        self.column = column
        self.expected = expected


class UnknownArrow(ParseError):
    code = "unknown-arrow"


class NonParallelRelation(ParseError):
    code = "non-parallel-relation"


class IndexOutOfRange(ParseError):
    code = "index-out-of-range"


class MissingContext(FindimError):
    """A module expression needs context (epss, system) that is absent."""

    code = "missing-context"


class UnknownCorpusName(FindimError):
    code = "unknown-corpus-name"
