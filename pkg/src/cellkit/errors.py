"""Exception hierarchy shared by all cellkit modules.

Every failure mode that callers are expected to catch has its own class;
anything raised as ``InternalConsistencyError`` (or a subclass) signals a bug
in cellkit itself, never bad user input.
"""


class CellKitError(Exception):
    """Base class for all cellkit errors."""


class WrongRing(CellKitError):
    """An operation was invoked over a ring it does not support."""


class NonSquare(CellKitError):
    """A square matrix was required."""


class DimensionMismatch(CellKitError):
    """Matrix/vector shapes are incompatible."""


class CompositeModulusRank(WrongRing):
    """Rank/kernel requested over Z/m with composite m."""


class NoCanonicalMap(CellKitError):
    """No canonical coefficient reduction exists between the two rings."""


class NotAnIdeal(CellKitError):
    """The indexed basis span is not a two-sided ideal; carries a witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class DatumInvalid(CellKitError):
    """A cell-datum axiom failed while extracting modules or forms."""


class WitnessDependence(DatumInvalid):
    """Strict Gram extraction found a witness-dependent entry."""


class NotNilpotent(CellKitError):
    """A subspace claimed to be a nilpotent ideal failed to power to zero."""


class NonTerminating(CellKitError):
    """A radical filtration failed to strictly decrease."""


class NotPrime(CellKitError):
    """A prime number was required."""


class SizeMismatch(CellKitError):
    """Partitions of different sizes were compared."""


class SizeLimit(CellKitError):
    """A construction exceeded its configured size guard."""


class HypothesisViolated(CellKitError):
    """A closed-form formula was requested outside its hypotheses."""


class EmptyInput(CellKitError):
    """A nonempty collection was required."""


class CandidateNotBasis(CellKitError):
    """A candidate cell basis is not unimodular over the ground ring."""


class CandidateNotCellular(CellKitError):
    """A candidate cell datum failed the axiom validator."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class SpecFileError(CellKitError):
    """An algebra spec file is malformed or fails validation."""


class InternalConsistencyError(CellKitError):
    """Two routes that must agree by theory disagreed; implementation bug."""


class CriteriaDisagree(InternalConsistencyError):
    """The equivalent quasi-heredity criteria returned different verdicts."""


class ChainNotIncreasing(InternalConsistencyError):
    """A heredity chain failed to be strictly increasing."""
