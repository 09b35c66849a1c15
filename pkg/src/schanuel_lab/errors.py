"""Exception hierarchy shared by all modules."""


class SchanuelLabError(Exception):
    """Base class for every error raised by this package."""


# --- exact linear algebra ---

class DimensionMismatch(SchanuelLabError):
    """Matrix shapes are incompatible for the requested operation."""


class NotSquare(SchanuelLabError):
    """A square matrix was required."""


# --- quiver algebras ---

class NotAdmissible(SchanuelLabError):
    """Relations do not define a visibly admissible ideal within the bound."""


class NotComposable(SchanuelLabError):
    """A path contains consecutive arrows that do not compose."""


class BadVertex(SchanuelLabError):
    """Vertex index out of range."""


# --- representation category ---

class AlgebraMismatch(SchanuelLabError):
    """Objects live over different algebras."""


class GenerationBudgetExceeded(SchanuelLabError):
    """Random generation failed to produce a valid sample within budget."""


class InvalidRepresentation(SchanuelLabError):
    """Dimension vector or arrow maps violate the algebra's constraints."""


class InvalidMorphism(SchanuelLabError):
    """Vertex maps have wrong shapes or break naturality."""


# --- extension structure ---

class InvalidConflation(SchanuelLabError):
    """The pair of maps is not a short exact (inflation, deflation) pair."""


class LiftFailed(SchanuelLabError):
    """A lift guaranteed by exactness could not be found (internal bug)."""


class SourceMismatch(SchanuelLabError):
    """Morphism source does not match the extension class."""


class TargetMismatch(SchanuelLabError):
    """Morphism target does not match the extension class."""


class BaseMismatch(SchanuelLabError):
    """Extension classes live over different (quotient, sub) pairs."""


class NotARetraction(SchanuelLabError):
    """The supplied morphism does not retract the inflation."""


class HypothesisViolated(SchanuelLabError):
    """Input data fails the hypotheses of the statement being verified."""


class UniquenessFailure(SchanuelLabError):
    """A morphism that must be unique is not (internal bug)."""


# --- resolutions ---

class ExtensionFailed(SchanuelLabError):
    """Extending along an inflation into an injective failed (internal bug)."""


class DepthInsufficient(SchanuelLabError):
    """Resolution is too short for the requested comparison level."""


class IsoSearchInconclusive(SchanuelLabError):
    """Isomorphism search ended without a verdict; surfaced, never swallowed."""


class NotAnIsomorphism(SchanuelLabError):
    """The supplied morphism is not invertible."""


# --- shell ---

class ParseError(SchanuelLabError):
    """Instance text is not valid JSON."""


class ValidationError(SchanuelLabError):
    """Instance JSON is well-formed but semantically invalid.

    Carries a list of (location, message) pairs naming offending fields.
    """

    def __init__(self, issues):
        self.issues = list(issues)
        lines = "; ".join(f"{loc}: {msg}" for loc, msg in self.issues)
        super().__init__(lines or "invalid instance")


class UnknownModule(SchanuelLabError):
    """A module or conflation name does not resolve in the instance."""
