"""Exception hierarchy for terwlab."""


class TerwLabError(Exception):
    """Base class for all terwlab errors."""


class AxiomViolation(TerwLabError):
    """A relation table fails one of the association-scheme axioms.

    ``axiom`` is one of ``"i"`` (partition), ``"ii"`` (diagonal class),
    ``"iii"`` (symmetry), ``"iv"`` (constant triple counts); ``witness``
    holds the offending indices.
    """

    def __init__(self, axiom: str, message: str, witness=None):
        super().__init__(f"axiom ({axiom}) violated: {message}")
        self.axiom = axiom
        self.witness = witness


class InvalidParameter(TerwLabError):
    """A generator or operation was called with out-of-range arguments."""


class ResourceLimit(TerwLabError):
    """Constructing the requested object would exceed the vertex cap."""


class ParseError(TerwLabError):
    """A scheme file is malformed or inconsistent with its declared shape."""


class NotPPolynomial(TerwLabError):
    """No relabeling of the classes satisfies the metric (tridiagonal) pattern."""


class DegenerateSpectrum(TerwLabError):
    """Two eigenvalues of the first intersection matrix coincide within tolerance."""


class OrderingMissing(TerwLabError):
    """An operation needs both a P- and a Q-polynomial ordering but one is absent."""


class NotThin(TerwLabError):
    """A module has a dual-idempotent slice of dimension greater than one."""


class DecompositionUnstable(TerwLabError):
    """Independent random draws of the decomposition disagree."""


class InvalidCell(TerwLabError):
    """The pair (dual endpoint, diameter) lies outside the feasible grid."""


class OutOfRange(TerwLabError):
    """No closed-form multiplicity is available for the requested cell."""


class BetaDegenerate(TerwLabError):
    """The common recurrence coefficient is +/-2, so no admissible q exists."""


class FitFailure(TerwLabError):
    """The eigenvalue sequences do not fit the two-parameter model."""


class NonIntegerMultiplicity(TerwLabError):
    """The multiplicity recurrence produced a value far from an integer."""


class NegativeMultiplicity(TerwLabError):
    """The multiplicity recurrence produced a significantly negative value."""


class NumericalCheckFailure(TerwLabError):
    """A build-time numerical invariant exceeded its tolerance."""
