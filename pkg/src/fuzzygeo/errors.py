"""Exception hierarchy. Everything raised on purpose derives from FuzzyGeoError."""


class FuzzyGeoError(Exception):
    """Base class for all errors raised by this package."""


# ── geometry ─────────────────────────────────────────────

class GeometryError(FuzzyGeoError):
    pass


class InvalidCoordinateError(GeometryError):
    """Latitude/longitude out of range, non-finite, or crossing the antimeridian/poles."""


class InvalidBufferError(GeometryError):
    """Negative buffer distance."""


class InvalidAnnulusError(GeometryError):
    """Annulus with inner radius >= outer radius or negative inner radius."""


class DegenerateGeometryError(GeometryError):
    """Too few or collinear points where a real polygon is required."""


class ProjectionError(GeometryError):
    """Local projection undefined (centered too close to a pole)."""


# ── expressions ──────────────────────────────────────────

class ExpressionError(FuzzyGeoError):
    pass


class ParseError(ExpressionError):
    """Input text does not match any template. Carries a character position."""

    def __init__(self, message: str, position: int | None = None):
        super().__init__(message)
        self.position = position


class ArityError(ExpressionError):
    """Wrong number of anchors for a relation."""


class ModifierNotAllowedError(ExpressionError):
    """Quantity modifier attached to a relation that cannot take one."""


class MissingModifierError(ExpressionError):
    """Relation requires a quantity modifier and none was given."""


class UnsupportedFrameError(ExpressionError):
    """Intrinsic frame of reference: representable, never geocodable."""


class SpecError(ExpressionError):
    """Inconsistent linguistic-variable specification."""


# ── semantics ────────────────────────────────────────────

class SemanticsError(FuzzyGeoError):
    pass


class OverlappingAnchorsError(SemanticsError):
    """'between' anchors overlap or touch; no gap to span."""


class KindMismatchError(SemanticsError):
    """Anchor kind (area/line/point) unusable for the relation."""


class UnknownModeError(SemanticsError):
    """No speed configured for the requested mode of transportation."""


class InvalidParamsError(SemanticsError):
    """SemanticParams field out of its documented range."""


# ── gazetteer ────────────────────────────────────────────

class GazetteerError(FuzzyGeoError):
    pass


class UnknownAnchorError(GazetteerError):
    """Name not in the gazetteer. Carries nearby-name suggestions."""

    def __init__(self, name: str, suggestions: list[str] | None = None):
        msg = f"unknown anchor {name!r}"
        if suggestions:
            msg += " (did you mean: " + ", ".join(suggestions) + "?)"
        super().__init__(msg)
        self.name = name
        self.suggestions = suggestions or []


class DuplicateNameError(GazetteerError):
    pass


class RemoteLookupError(GazetteerError):
    """Remote boundary lookup failed: network down, no result, or ambiguous."""

    def __init__(self, message: str, candidates: list[str] | None = None):
        super().__init__(message)
        self.candidates = candidates or []


# ── evaluation ───────────────────────────────────────────

class EvalError(FuzzyGeoError):
    pass


class EmptyMatrixError(EvalError):
    pass


class UnknownSessionError(EvalError):
    pass


class SessionCompleteError(EvalError):
    """Rating submitted for a session whose matrix is already full."""
