"""Expression domain types: relation taxonomy, quantity modifiers, the
linguistic-variable binding, and structural validation.

An expression is an ordered list of constraints chained onto one implicit
head referent; geocoding intersects the constraint regions left to right.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

from .errors import (
    ArityError,
    ModifierNotAllowedError,
    SpecError,
    UnsupportedFrameError,
)
from .geom import BoundingBox, Region

MILES_TO_KM = 1.609344


class RelationKind(enum.Enum):
    BETWEEN = "between"
    AMONG = "among"
    CARDINAL_OF = "cardinal_of"
    PART_OF = "part_of"
    AWAY_FROM = "away_from"
    NEAR = "near"
    IN = "in"
    OUTSIDE = "outside"
    ALONG_ON = "along_on"
    WITH = "with"


class FrameOfReference(enum.Enum):
    RELATIVE = "relative"
    ABSOLUTE = "absolute"
    INTRINSIC = "intrinsic"  # representable, never geocodable


class Unit(enum.Enum):
    MINUTES = "minutes"
    HOURS = "hours"
    KM = "km"
    MILES = "miles"


TIME_UNITS = frozenset({Unit.MINUTES, Unit.HOURS})

# (min_anchors, max_anchors) per kind; None = unbounded
ARITY: dict[RelationKind, tuple[int, int | None]] = {
    RelationKind.BETWEEN: (2, 2),
    RelationKind.AMONG: (3, None),
    RelationKind.WITH: (2, 2),
    RelationKind.CARDINAL_OF: (1, 1),
    RelationKind.PART_OF: (1, 1),
    RelationKind.AWAY_FROM: (1, 1),
    RelationKind.NEAR: (1, 1),
    RelationKind.IN: (1, 1),
    RelationKind.OUTSIDE: (1, 1),
    RelationKind.ALONG_ON: (1, 1),
}

MODIFIABLE = frozenset({RelationKind.CARDINAL_OF, RelationKind.AWAY_FROM, RelationKind.NEAR})

# Cardinal and part-of relations use the earth's frame; the rest anchor-relative.
# ("with" and "along/on" carry no stated frame; tagged relative here.)
DEFAULT_FRAME: dict[RelationKind, FrameOfReference] = {
    kind: (FrameOfReference.ABSOLUTE
           if kind in (RelationKind.CARDINAL_OF, RelationKind.PART_OF)
           else FrameOfReference.RELATIVE)
    for kind in RelationKind
}

DIRECTIONS = ("north", "south", "east", "west")
DIRECTION_ADJECTIVES = {"north": "northern", "south": "southern",
                        "east": "eastern", "west": "western"}


@dataclass(frozen=True)
class QuantityModifier:
    value: float
    unit: Unit

    def __post_init__(self):
        if not self.value > 0:
            raise ValueError(f"quantity must be positive, got {self.value}")

    @property
    def kind(self) -> str:
        return "time" if self.unit in TIME_UNITS else "distance"

    def hours(self) -> float:
        if self.unit is Unit.MINUTES:
            return self.value / 60.0
        if self.unit is Unit.HOURS:
            return self.value
        raise ValueError(f"{self.unit.value} is not a time unit")

    def km(self) -> float:
        if self.unit is Unit.KM:
            return self.value
        if self.unit is Unit.MILES:
            return self.value * MILES_TO_KM
        raise ValueError(f"{self.unit.value} is not a distance unit")


@dataclass(frozen=True)
class AnchorRef:
    name: str
    resolved: object | None = None  # AnchorObject once looked up

    def __post_init__(self):
        if not self.name or not self.name.strip():
            raise ValueError("anchor name must be non-empty")


@dataclass(frozen=True)
class Constraint:
    kind: RelationKind
    anchors: tuple[AnchorRef, ...]
    modifier: QuantityModifier | None = None
    frame: FrameOfReference | None = None
    direction: str | None = None  # for CARDINAL_OF / PART_OF
    term: str | None = None       # surface term, kept for intrinsic phrases

    def __post_init__(self):
        if self.frame is None:
            object.__setattr__(self, "frame", DEFAULT_FRAME[self.kind])


@dataclass(frozen=True)
class SpatialExpression:
    constraints: tuple[Constraint, ...]
    subject: AnchorRef | None = None  # explicit located thing, when stated

    def __post_init__(self):
        if not self.constraints:
            raise ValueError("expression needs at least one constraint")


def _check_constraint(c: Constraint) -> None:
    lo, hi = ARITY[c.kind]
    n = len(c.anchors)
    if n < lo or (hi is not None and n > hi):
        bound = f"exactly {lo}" if hi == lo else (f">= {lo}" if hi is None else f"{lo}..{hi}")
        raise ArityError(f"{c.kind.value} takes {bound} anchors, got {n}")
    if c.modifier is not None and c.kind not in MODIFIABLE:
        raise ModifierNotAllowedError(f"{c.kind.value} cannot take a quantity modifier")
    if c.frame is FrameOfReference.INTRINSIC:
        raise UnsupportedFrameError(
            f"intrinsic frame of reference is not geocodable ({c.term or c.kind.value!s})")
    if c.kind is RelationKind.CARDINAL_OF and c.direction not in DIRECTIONS:
        raise ArityError(f"cardinal direction must be one of {DIRECTIONS}, got {c.direction!r}")
    if c.kind is RelationKind.PART_OF and c.direction not in DIRECTIONS:
        raise ArityError(f"part direction must be one of {DIRECTIONS}, got {c.direction!r}")


def validate(expr: SpatialExpression,
             sizes: dict[str, float] | None = None) -> tuple[SpatialExpression, list[str]]:
    """Structural validation. Arity/frame/modifier violations raise; the
    size-ordering tendency (a larger subject "in" a smaller object) only warns.
    """
    warnings: list[str] = []
    for c in expr.constraints:
        _check_constraint(c)
    if sizes and expr.subject is not None:
        subj_size = sizes.get(expr.subject.name)
        if subj_size is not None:
            for c in expr.constraints:
                if c.kind in (RelationKind.IN, RelationKind.OUTSIDE):
                    obj_size = sizes.get(c.anchors[0].name)
                    if obj_size is not None and subj_size > obj_size:
                        warnings.append(
                            f"size ordering: subject {expr.subject.name!r} "
                            f"({subj_size:g} km^2) is larger than object "
                            f"{c.anchors[0].name!r} ({obj_size:g} km^2)")
    return expr, warnings


# ── JSON wire shape ──────────────────────────────────────

def modifier_to_json(m: QuantityModifier | None):
    if m is None:
        return None
    return {"value": m.value, "unit": m.unit.value}


def modifier_from_json(obj) -> QuantityModifier | None:
    if obj is None:
        return None
    return QuantityModifier(float(obj["value"]), Unit(obj["unit"]))


def expression_to_json(expr: SpatialExpression) -> dict:
    return {
        "subject": expr.subject.name if expr.subject else None,
        "constraints": [
            {
                "kind": c.kind.value,
                "direction": c.direction,
                "anchors": [a.name for a in c.anchors],
                "modifier": modifier_to_json(c.modifier),
                "frame": c.frame.value,
                "term": c.term,
            }
            for c in expr.constraints
        ],
    }


def expression_from_json(obj: dict) -> SpatialExpression:
    constraints = []
    for c in obj["constraints"]:
        constraints.append(Constraint(
            kind=RelationKind(c["kind"]),
            anchors=tuple(AnchorRef(a) for a in c["anchors"]),
            modifier=modifier_from_json(c.get("modifier")),
            frame=FrameOfReference(c["frame"]) if c.get("frame") else None,
            direction=c.get("direction"),
            term=c.get("term"),
        ))
    subject = obj.get("subject")
    return SpatialExpression(tuple(constraints),
                             subject=AnchorRef(subject) if subject else None)


# ── the linguistic-variable binding ──────────────────────

@dataclass(frozen=True)
class LinguisticVariableSpec:
    """Binds a variable name to its terms, anchors, extents, grammar templates
    and the semantic rule that turns a matched constraint into a region."""

    variable: str
    terms: frozenset[str]
    anchors: frozenset[str] = frozenset()
    extents: dict[str, BoundingBox | Region] = field(default_factory=dict)
    templates: tuple = ()  # parser.Template instances
    rule: str = ""
    rule_params: dict = field(default_factory=dict)

    def check(self) -> None:
        missing = self.anchors - set(self.extents)
        if missing:
            raise SpecError(f"anchors without extents: {sorted(missing)}")
        for t in self.templates:
            extra = t.terms - self.terms
            if extra:
                raise SpecError(
                    f"template for {t.produces.value} uses terms outside the "
                    f"variable's term set: {sorted(extra)}")

    def bind(self, anchors: frozenset[str], extents: dict) -> "LinguisticVariableSpec":
        bound = replace(self, anchors=anchors, extents=dict(extents))
        bound.check()
        return bound
