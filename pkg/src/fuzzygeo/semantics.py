"""Semantic rules: each validated constraint becomes a FuzzyRegion; chained
constraints compose by fuzzy intersection, so every added constraint can only
shrink the referent.

All constructions run in a local equirectangular plane (km) around the
anchors involved. The fuzzy split of a quantity modifier is fixed: the core
ring takes the inner half of the fuzz allowance, the support the full
allowance (e.g. a 5% fuzz on "6 hours" is +/-18 minutes of support).
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, replace

import numpy as np
from shapely.geometry import LineString, Polygon

from . import geom
from .errors import (
    InvalidParamsError,
    KindMismatchError,
    MissingModifierError,
    OverlappingAnchorsError,
    SemanticsError,
    UnknownModeError,
)
from .gazetteer import AREA, LINE, POINT, AnchorObject, Gazetteer
from .geom import (
    FuzzyRegion,
    Region,
    _region_to_shapely,
    _shapely_to_region,
    annulus,
    buffer_region,
    convex_hull,
    intersect_fuzzy,
    projection_for,
    region_difference,
    region_intersection,
    region_union,
)
from .model import (
    Constraint,
    LinguisticVariableSpec,
    QuantityModifier,
    RelationKind,
    SpatialExpression,
    expression_to_json,
    validate,
)

DEFAULT_SPEED_KMH = {"car": 96.56}  # 60 mph; the culturally default mode


@dataclass(frozen=True)
class SemanticParams:
    """Tunable rule parameters; defaults follow the 5%-fuzz convention."""

    alpha_frac: float = 0.05        # between: fraction of gap distance
    beta_frac: float = 0.05         # between/in: fraction of facing-edge / char length
    fuzz_frac: float = 0.05         # modifier buffer fraction
    cone_half_angle: float = 45.0   # degrees each side of the cardinal axis
    max_range_km: float = 20037.5   # half the equatorial circumference
    practical_range_km: float | None = 2000.0  # None opts into the full range
    speed_kmh: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_SPEED_KMH))
    default_mode: str = "car"
    near_multiplier: float = 2.0    # near/outside reach, in characteristic lengths
    corridor_km: float = 1.0        # along/on half-width
    part_fraction: float = 0.5      # northern z: slice depth
    part_band_frac: float = 0.1     # fuzzy widening of the slicing line
    point_char_km: float = 1.0      # characteristic length assigned to point anchors

    def __post_init__(self):
        for name in ("alpha_frac", "beta_frac", "fuzz_frac", "part_fraction", "part_band_frac"):
            v = getattr(self, name)
            if not 0.0 < v <= 1.0:
                raise InvalidParamsError(f"{name} must be in (0, 1], got {v}")
        if not 0.0 < self.cone_half_angle < 90.0:
            raise InvalidParamsError(f"cone_half_angle must be in (0, 90), got {self.cone_half_angle}")
        for name in ("max_range_km", "near_multiplier", "corridor_km", "point_char_km"):
            if not getattr(self, name) > 0.0:
                raise InvalidParamsError(f"{name} must be positive")
        if self.practical_range_km is not None and not self.practical_range_km > 0.0:
            raise InvalidParamsError("practical_range_km must be positive or None")
        for mode, v in self.speed_kmh.items():
            if not v > 0.0:
                raise InvalidParamsError(f"speed for mode {mode!r} must be positive")

    def effective_range_km(self) -> float:
        if self.practical_range_km is None:
            return self.max_range_km
        return min(self.practical_range_km, self.max_range_km)

    def with_overrides(self, overrides: dict) -> "SemanticParams":
        """Apply {field: value} overrides; 'speed_kmh.<mode>' patches one speed."""
        fields = dict()
        speeds = dict(self.speed_kmh)
        for key, value in overrides.items():
            if key.startswith("speed_kmh."):
                speeds[key.split(".", 1)[1]] = float(value)
            elif key == "speed_kmh":
                speeds = {m: float(v) for m, v in value.items()}
            elif key == "practical_range_km":
                fields[key] = None if value in (None, "none", "full") else float(value)
            elif key == "default_mode":
                fields[key] = str(value)
            elif key in self.__dataclass_fields__:
                fields[key] = float(value)
            else:
                raise InvalidParamsError(f"unknown parameter {key!r}")
        return replace(self, speed_kmh=speeds, **fields)

    def to_json(self) -> dict:
        return asdict(self)


# ── quantities ───────────────────────────────────────────

def time_to_distance(q: QuantityModifier, mode: str, params: SemanticParams) -> float:
    """Crow-flies km covered in the quantity's time at the mode's speed."""
    if q.kind != "time":
        raise SemanticsError(f"{q.unit.value} is not a time unit")
    speed = params.speed_kmh.get(mode)
    if speed is None:
        raise UnknownModeError(f"no speed configured for mode {mode!r}")
    return q.hours() * speed


def modifier_distance_km(q: QuantityModifier, params: SemanticParams,
                         mode: str | None = None) -> float:
    if q.kind == "time":
        return time_to_distance(q, mode or params.default_mode, params)
    return q.km()


@dataclass(frozen=True)
class DistanceBand:
    """Ring radii induced by a fuzzy quantity around an anchor."""

    center_km: float
    core: tuple[float, float]
    support: tuple[float, float]


def modifier_band(q: QuantityModifier, params: SemanticParams,
                  mode: str | None = None) -> DistanceBand:
    r = modifier_distance_km(q, params, mode)
    f = params.fuzz_frac
    return DistanceBand(
        center_km=r,
        core=(r * (1.0 - f / 2.0), r * (1.0 + f / 2.0)),
        support=(r * (1.0 - f), r * (1.0 + f)),
    )


def characteristic_length_km(anchor_bbox: geom.BoundingBox, params: SemanticParams) -> float:
    """Bbox diagonal; point anchors get a configured floor so rules that scale
    with anchor size stay non-degenerate."""
    d = anchor_bbox.diagonal_km()
    return d if d > 0.0 else params.point_char_km


# ── rule constructors ────────────────────────────────────

def _projected_bounds(region: Region, proj) -> tuple[float, float, float, float]:
    b = region.bbox()
    xs, ys = proj.to_xy([b.min_lat, b.max_lat], [b.min_lon, b.max_lon])
    return xs[0], ys[0], xs[1], ys[1]


def geocode_between(a: Region, b: Region, params: SemanticParams) -> FuzzyRegion:
    """Slab spanning the gap between facing edges (bbox anchors), or the
    convex-hull gap region for complex anchors. Symmetric in its arguments."""
    proj = projection_for(a, b)
    ga = _region_to_shapely(a, proj)
    gb = _region_to_shapely(b, proj)
    if ga.intersects(gb):
        raise OverlappingAnchorsError("'between' anchors overlap or touch")

    if a.is_rectangle() and b.is_rectangle():
        ax0, ay0, ax1, ay1 = _projected_bounds(a, proj)
        bx0, by0, bx1, by1 = _projected_bounds(b, proj)
        gap_y = max(by0 - ay1, ay0 - by1)
        gap_x = max(bx0 - ax1, ax0 - bx1)
        dy = abs((ay0 + ay1) - (by0 + by1)) / 2.0
        dx = abs((ax0 + ax1) - (bx0 + bx1)) / 2.0
        if gap_y <= 0.0 and gap_x <= 0.0:
            raise OverlappingAnchorsError("'between' anchors have no gap to span")
        axis = "y" if (gap_y > 0.0 and (gap_x <= 0.0 or dy >= dx)) else "x"
        if axis == "y":
            lo, hi = (ay1, by0) if by0 - ay1 > 0 else (by1, ay0)
            a_edge, b_edge = ax1 - ax0, bx1 - bx0
            cx0, cx1 = (ax0, ax1) if a_edge <= b_edge else (bx0, bx1)
            alpha = params.alpha_frac * (hi - lo)
            beta = params.beta_frac * min(a_edge, b_edge)
            core = Polygon([(cx0, lo), (cx1, lo), (cx1, hi), (cx0, hi)])
            support = Polygon([(cx0 - beta, lo - alpha), (cx1 + beta, lo - alpha),
                               (cx1 + beta, hi + alpha), (cx0 - beta, hi + alpha)])
        else:
            lo, hi = (ax1, bx0) if bx0 - ax1 > 0 else (bx1, ax0)
            a_edge, b_edge = ay1 - ay0, by1 - by0
            cy0, cy1 = (ay0, ay1) if a_edge <= b_edge else (by0, by1)
            alpha = params.alpha_frac * (hi - lo)
            beta = params.beta_frac * min(a_edge, b_edge)
            core = Polygon([(lo, cy0), (hi, cy0), (hi, cy1), (lo, cy1)])
            support = Polygon([(lo - alpha, cy0 - beta), (hi + alpha, cy0 - beta),
                               (hi + alpha, cy1 + beta), (lo - alpha, cy1 + beta)])
        return FuzzyRegion(_shapely_to_region(core, proj),
                           _shapely_to_region(support, proj))

    # complex anchors: the area inside the convex hull, anchors excluded
    hull = convex_hull(np.vstack([a.exterior_vertices(), b.exterior_vertices()]))
    core = region_difference(region_difference(hull, a), b)
    alpha = params.alpha_frac * float(ga.distance(gb))
    support = region_intersection(buffer_region(core, alpha), hull) if alpha > 0 else core
    support = region_difference(region_difference(support, a), b)
    # float jitter from the clip can leave a core vertex a hair outside
    support = region_union(support, core)
    return FuzzyRegion(core, support)


_CONE_VECTORS = {"south": (0.0, -1.0), "north": (0.0, 1.0),
                 "east": (1.0, 0.0), "west": (-1.0, 0.0)}


def _cone_polygon(direction: str, bounds, length_km: float, half_angle_deg: float) -> Polygon:
    x0, y0, x1, y1 = bounds
    s = math.tan(math.radians(half_angle_deg)) * length_km
    L = length_km
    if direction == "south":
        return Polygon([(x0, y0), (x1, y0), (x1 + s, y0 - L), (x0 - s, y0 - L)])
    if direction == "north":
        return Polygon([(x0, y1), (x1, y1), (x1 + s, y1 + L), (x0 - s, y1 + L)])
    if direction == "east":
        return Polygon([(x1, y0), (x1, y1), (x1 + L, y1 + s), (x1 + L, y0 - s)])
    if direction == "west":
        return Polygon([(x0, y0), (x0, y1), (x0 - L, y1 + s), (x0 - L, y0 - s)])
    raise SemanticsError(f"invalid cardinal direction {direction!r}")


def geocode_cardinal(direction: str, anchor: Region, modifier: QuantityModifier | None,
                     params: SemanticParams, mode: str | None = None) -> FuzzyRegion:
    """Cone apexed on the anchor's facing edge; a quantity modifier narrows it
    to a fuzzy distance band measured from the anchor."""
    if direction not in _CONE_VECTORS:
        raise SemanticsError(f"invalid cardinal direction {direction!r}")
    proj = projection_for(anchor)
    cone = _cone_polygon(direction, _projected_bounds(anchor, proj),
                         params.effective_range_km(), params.cone_half_angle)
    cone = cone.intersection(proj.world_rect())
    if modifier is None:
        region = _shapely_to_region(cone, proj)
        return FuzzyRegion.crisp(region)
    band = modifier_band(modifier, params, mode)
    ganchor = _region_to_shapely(anchor, proj)
    core_ring = ganchor.buffer(band.core[1]).difference(ganchor.buffer(band.core[0]))
    support_ring = ganchor.buffer(band.support[1]).difference(ganchor.buffer(band.support[0]))
    return FuzzyRegion(_shapely_to_region(cone.intersection(core_ring), proj),
                       _shapely_to_region(cone.intersection(support_ring), proj))


def geocode_away_from(anchor: Region, modifier: QuantityModifier | None,
                      params: SemanticParams, mode: str | None = None) -> FuzzyRegion:
    """Fuzzy ring at the modifier's distance; the hole over the anchor is
    always preserved. A bare "away from" has no defined extent and is rejected."""
    if modifier is None:
        raise MissingModifierError("'away_from' needs a time or distance quantity")
    band = modifier_band(modifier, params, mode)
    core = annulus(anchor, *band.core)
    support = annulus(anchor, *band.support)
    return FuzzyRegion(core, support)


def geocode_containment(kind: RelationKind, anchor: Region,
                        params: SemanticParams) -> FuzzyRegion:
    char = characteristic_length_km(anchor.bbox(), params)
    if kind is RelationKind.IN:
        support = buffer_region(anchor, params.beta_frac * char)
        return FuzzyRegion(anchor, support)
    if kind is RelationKind.OUTSIDE:
        reach = params.near_multiplier * char
        core = annulus(anchor, 0.0, reach)
        support = annulus(anchor, 0.0, reach * (1.0 + params.fuzz_frac))
        return FuzzyRegion(core, support)
    raise SemanticsError(f"not a containment kind: {kind}")


def geocode_near(anchor: Region, params: SemanticParams,
                 context_scale: float | None = None,
                 modifier: QuantityModifier | None = None,
                 mode: str | None = None) -> FuzzyRegion:
    """Proximity disk scaling with the anchor's characteristic length, so
    "near Mexico" reaches much farther than "near Columbus". An explicit
    quantity replaces the scaled radius."""
    if modifier is not None:
        radius = modifier_distance_km(modifier, params, mode)
    else:
        char = characteristic_length_km(anchor.bbox(), params) * (context_scale or 1.0)
        radius = params.near_multiplier * char
    core = buffer_region(anchor, radius)
    support = buffer_region(anchor, radius * (1.0 + params.fuzz_frac))
    return FuzzyRegion(core, support)


def geocode_part(direction: str, anchor: Region, params: SemanticParams) -> FuzzyRegion:
    """The directional slice of the anchor ("northern z"): part_fraction of its
    bbox on that side, clipped to the anchor, with a fuzzy widening band."""
    if direction not in _CONE_VECTORS:
        raise SemanticsError(f"invalid part direction {direction!r}")
    b = anchor.bbox()
    dlat = b.max_lat - b.min_lat
    dlon = b.max_lon - b.min_lon
    f = params.part_fraction
    w = params.part_band_frac

    def lat_slice(lo, hi):
        return Region.from_bbox(geom.BoundingBox(max(lo, b.min_lat), b.min_lon,
                                                 min(hi, b.max_lat), b.max_lon))

    def lon_slice(lo, hi):
        return Region.from_bbox(geom.BoundingBox(b.min_lat, max(lo, b.min_lon),
                                                 b.max_lat, min(hi, b.max_lon)))

    if direction == "north":
        core_s, supp_s = lat_slice(b.max_lat - f * dlat, b.max_lat), \
            lat_slice(b.max_lat - (f + w) * dlat, b.max_lat)
    elif direction == "south":
        core_s, supp_s = lat_slice(b.min_lat, b.min_lat + f * dlat), \
            lat_slice(b.min_lat, b.min_lat + (f + w) * dlat)
    elif direction == "east":
        core_s, supp_s = lon_slice(b.max_lon - f * dlon, b.max_lon), \
            lon_slice(b.max_lon - (f + w) * dlon, b.max_lon)
    else:
        core_s, supp_s = lon_slice(b.min_lon, b.min_lon + f * dlon), \
            lon_slice(b.min_lon, b.min_lon + (f + w) * dlon)
    return FuzzyRegion(region_intersection(anchor, core_s),
                       region_intersection(anchor, supp_s))


def geocode_along(line: np.ndarray, params: SemanticParams) -> FuzzyRegion:
    """Corridor with contact semantics: the core touches the line itself."""
    if line is None or len(line) < 2:
        raise KindMismatchError("'along/on' needs a line anchor")
    lat0 = float(line[:, 0].mean())
    lon0 = float(line[:, 1].mean())
    proj = geom.LocalProjection(max(-89.0, min(89.0, lat0)), lon0)
    x, y = proj.to_xy(line[:, 0], line[:, 1])
    ls = LineString(np.column_stack([x, y]))
    core = ls.buffer(params.corridor_km)
    support = ls.buffer(params.corridor_km * (1.0 + params.fuzz_frac))
    return FuzzyRegion(_shapely_to_region(core, proj), _shapely_to_region(support, proj))


def geocode_with(a: Region, b: Region, params: SemanticParams) -> FuzzyRegion:
    """Co-location: hull of both anchors, fuzz-buffered support."""
    hull = convex_hull(np.vstack([a.exterior_vertices(), b.exterior_vertices()]))
    char = characteristic_length_km(hull.bbox(), params)
    support = buffer_region(hull, params.fuzz_frac * char)
    return FuzzyRegion(hull, support)


def geocode_among(anchors: list[Region], params: SemanticParams) -> FuzzyRegion:
    """Hull of all anchors minus the anchors themselves (they are excluded)."""
    if len(anchors) < 3:
        raise SemanticsError(f"'among' needs >= 3 anchors, got {len(anchors)}")
    hull = convex_hull(np.vstack([r.exterior_vertices() for r in anchors]))
    char = characteristic_length_km(hull.bbox(), params)
    core = hull
    support = buffer_region(hull, params.fuzz_frac * char)
    for r in anchors:
        if r.area_km2() > 0.0:
            core = region_difference(core, r)
            support = region_difference(support, r)
    return FuzzyRegion(core, support)


# ── expression-level geocoding ───────────────────────────

RULE_FOR_KIND: dict[RelationKind, str] = {
    RelationKind.BETWEEN: "gap_slab",
    RelationKind.AMONG: "hull_minus_anchors",
    RelationKind.CARDINAL_OF: "cardinal_cone",
    RelationKind.PART_OF: "part_slice",
    RelationKind.AWAY_FROM: "distance_ring",
    RelationKind.NEAR: "proximity_disk",
    RelationKind.IN: "containment_core",
    RelationKind.OUTSIDE: "exclusion_ring",
    RelationKind.ALONG_ON: "corridor",
    RelationKind.WITH: "joint_hull",
}


def _resolved(c: Constraint, gaz: Gazetteer, warnings: list[str]) -> list[AnchorObject]:
    return [gaz.resolve(a.name, warnings) for a in c.anchors]


def _require_kind(anchor: AnchorObject, kinds: tuple[str, ...], relation: str) -> None:
    if anchor.kind not in kinds:
        raise KindMismatchError(
            f"'{relation}' needs a {'/'.join(kinds)} anchor, got {anchor.kind} "
            f"({anchor.name!r})")


def constraint_region(c: Constraint, gaz: Gazetteer, params: SemanticParams,
                      warnings: list[str]) -> FuzzyRegion:
    anchors = _resolved(c, gaz, warnings)
    kind = c.kind
    if kind is RelationKind.BETWEEN:
        return geocode_between(anchors[0].extent_region(), anchors[1].extent_region(), params)
    if kind is RelationKind.AMONG:
        return geocode_among([a.extent_region() for a in anchors], params)
    if kind is RelationKind.CARDINAL_OF:
        return geocode_cardinal(c.direction, anchors[0].extent_region(), c.modifier, params)
    if kind is RelationKind.PART_OF:
        _require_kind(anchors[0], (AREA,), "part-of")
        return geocode_part(c.direction, anchors[0].extent_region(), params)
    if kind is RelationKind.AWAY_FROM:
        return geocode_away_from(anchors[0].extent_region(), c.modifier, params)
    if kind is RelationKind.NEAR:
        _require_kind(anchors[0], (AREA, POINT), "near")
        return geocode_near(anchors[0].extent_region(), params, modifier=c.modifier)
    if kind in (RelationKind.IN, RelationKind.OUTSIDE):
        _require_kind(anchors[0], (AREA,), kind.value)
        return geocode_containment(kind, anchors[0].extent_region(), params)
    if kind is RelationKind.ALONG_ON:
        _require_kind(anchors[0], (LINE,), "along/on")
        return geocode_along(anchors[0].line, params)
    if kind is RelationKind.WITH:
        return geocode_with(anchors[0].extent_region(), anchors[1].extent_region(), params)
    raise SemanticsError(f"no rule for kind {kind}")


def _anchor_sizes(expr: SpatialExpression, gaz: Gazetteer) -> dict[str, float]:
    sizes: dict[str, float] = {}
    names = {a.name for c in expr.constraints for a in c.anchors}
    if expr.subject is not None:
        names.add(expr.subject.name)
    for name in names:
        try:
            anchor = gaz.resolve(name)
        except Exception:
            continue
        if anchor.kind == AREA:
            sizes[name] = anchor.region.area_km2()
    return sizes


def geocode(expr: SpatialExpression, gaz: Gazetteer,
            params: SemanticParams | None = None,
            warnings: list[str] | None = None) -> FuzzyRegion:
    """Validate, then fold per-constraint regions under fuzzy intersection,
    left to right. An empty result is permitted and reported as a warning."""
    params = params or SemanticParams()
    sink = warnings if warnings is not None else []
    expr, vwarnings = validate(expr, sizes=_anchor_sizes(expr, gaz))
    sink.extend(vwarnings)
    result: FuzzyRegion | None = None
    for i, c in enumerate(expr.constraints):
        fr = constraint_region(c, gaz, params, sink)
        result = fr if result is None else intersect_fuzzy(result, fr)
        if result.is_empty:
            sink.append(f"empty intersection after constraint {i} ({c.kind.value})")
    return result


# ── serialization ────────────────────────────────────────

def canonical_json(obj) -> str:
    """The one JSON form used by both the CLI and the service (byte-stable)."""
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def fuzzy_region_to_feature_collection(fr: FuzzyRegion, expr: SpatialExpression | None = None,
                                       params: SemanticParams | None = None,
                                       warnings: list[str] | None = None) -> dict:
    meta: dict = {}
    if expr is not None:
        meta["expression"] = expression_to_json(expr)
    if params is not None:
        meta["params"] = params.to_json()
    meta["warnings"] = list(warnings or [])
    return {
        "type": "FeatureCollection",
        "features": [
            {"type": "Feature", "id": "core", "properties": {"mu": 1.0},
             "geometry": geom.region_to_geojson(fr.core)},
            {"type": "Feature", "id": "support",
             "properties": {"mu_min": 0.0, "mu_max": 1.0},
             "geometry": geom.region_to_geojson(fr.support)},
        ],
        "meta": meta,
    }


# ── the linguistic-variable catalog ──────────────────────

_VARIABLE_FOR_KIND = {
    RelationKind.BETWEEN: "topological",
    RelationKind.AMONG: "topological",
    RelationKind.WITH: "topological",
    RelationKind.IN: "topological",
    RelationKind.OUTSIDE: "topological",
    RelationKind.ALONG_ON: "topological",
    RelationKind.CARDINAL_OF: "direction",
    RelationKind.PART_OF: "direction",
    RelationKind.AWAY_FROM: "distance",
    RelationKind.NEAR: "distance",
}


def builtin_catalog(gaz: Gazetteer | None = None,
                    params: SemanticParams | None = None) -> tuple[LinguisticVariableSpec, ...]:
    """One variable spec per relation kind, binding terms, grammar templates
    and the semantic rule; anchors/extents come from the gazetteer when given."""
    from .parser import TEMPLATES  # local import: parser depends on model only

    params = params or SemanticParams()
    anchors = frozenset(e.name for e in gaz.entries) if gaz else frozenset()
    extents = {e.name: e.bbox() for e in gaz.entries} if gaz else {}
    specs = []
    for kind in RelationKind:
        templates = tuple(t for t in TEMPLATES if t.produces is kind and not t.intrinsic)
        terms = frozenset().union(*(t.terms for t in templates))
        spec = LinguisticVariableSpec(
            variable=_VARIABLE_FOR_KIND[kind],
            terms=terms,
            anchors=anchors,
            extents=extents,
            templates=templates,
            rule=RULE_FOR_KIND[kind],
            rule_params=params.to_json(),
        )
        spec.check()
        specs.append(spec)
    return tuple(specs)
