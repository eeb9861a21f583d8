"""Exception taxonomy for the unit-group pipeline."""


class UnitGroupError(Exception):
    """Base class for all library errors."""


class ReduciblePolynomial(UnitGroupError):
    pass


class NoRootInInterval(UnitGroupError):
    pass


class MultipleRootsInInterval(UnitGroupError):
    pass


class FieldMismatch(UnitGroupError):
    pass


class DimensionMismatch(UnitGroupError):
    pass


class NotInAlgebra(UnitGroupError):
    pass


class IndefiniteWithoutSplittingData(UnitGroupError):
    """An indefinite quaternion algebra needs a user-chosen real splitting."""


class PositivityFailure(UnitGroupError):
    """Declared involution/trace data fails the positivity validation."""


class NotPositive(UnitGroupError):
    """A form that must be positive definite is not."""


class ChartMismatch(UnitGroupError):
    pass


class GroupTooLarge(UnitGroupError):
    """Finite-group closure exceeded its element cap."""


class NoProgress(UnitGroupError):
    """An ascent step failed to enlarge the minimal-vector span."""


class DirectionNotOutward(UnitGroupError):
    """A claimed facet direction does not leave the current domain."""


class BudgetExceeded(UnitGroupError):
    """Orbit or iteration budget exhausted before closure."""


class NotWellRounded(UnitGroupError):
    """Face class lies in the boundary and is excluded from the complex."""


class NonInvertedTreeImpossible(UnitGroupError):
    pass


class NoStabilizerWitness(UnitGroupError):
    pass


class WalkNotClosing(UnitGroupError):
    """A ridge walk failed to return to its starting domain."""


class RelatorEvaluationFailure(UnitGroupError):
    """A relator does not evaluate to the identity (or central sign)."""


class AmbiguousCrossing(UnitGroupError):
    """Geodesic met a face of codimension >= 2; caller should perturb."""


class NotAUnit(UnitGroupError):
    pass


class PerturbationBudgetExceeded(UnitGroupError):
    pass


class OrderNotClosed(UnitGroupError):
    """Order basis is not multiplicatively closed; carries a witness pair."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ProblemFileError(UnitGroupError):
    """Problem-file parse or validation error with location info."""

    def __init__(self, message, line=None):
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)
        self.line = line
