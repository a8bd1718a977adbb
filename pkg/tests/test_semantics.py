from __future__ import annotations

import math

import numpy as np
import pytest

from fuzzygeo import geom
from fuzzygeo.errors import (
    KindMismatchError,
    MissingModifierError,
    OverlappingAnchorsError,
    SemanticsError,
    UnknownModeError,
)
from fuzzygeo.geom import (
    KM_PER_DEG,
    BoundingBox,
    GeoPoint,
    Region,
    membership,
    membership_many,
    random_points_in,
    region_contains,
    regions_allclose,
)
from fuzzygeo.model import (
    AnchorRef,
    Constraint,
    QuantityModifier,
    RelationKind,
    SpatialExpression,
    Unit,
)
from fuzzygeo.parser import parse
from fuzzygeo.semantics import (
    SemanticParams,
    canonical_json,
    fuzzy_region_to_feature_collection,
    geocode,
    geocode_along,
    geocode_among,
    geocode_away_from,
    geocode_between,
    geocode_cardinal,
    geocode_containment,
    geocode_near,
    geocode_part,
    geocode_with,
    modifier_band,
    time_to_distance,
)

from .oracles import random_disjoint_box_pair, shorter_facing_edge_km

P = SemanticParams()


def box(min_lat, min_lon, max_lat, max_lon) -> Region:
    return Region.from_bbox(BoundingBox(min_lat, min_lon, max_lat, max_lon))


OHIO = box(38.40, -84.82, 42.32, -80.51)


# ── quantities ───────────────────────────────────────────

def test_time_to_distance_car_defaults():
    assert time_to_distance(QuantityModifier(6, Unit.HOURS), "car", P) == pytest.approx(579.36)
    assert time_to_distance(QuantityModifier(0.5, Unit.HOURS), "car", P) == pytest.approx(48.28)


def test_sixty_minutes_equals_one_hour():
    a = time_to_distance(QuantityModifier(60, Unit.MINUTES), "car", P)
    b = time_to_distance(QuantityModifier(1, Unit.HOURS), "car", P)
    assert a == b


def test_unknown_mode_is_an_error():
    with pytest.raises(UnknownModeError):
        time_to_distance(QuantityModifier(1, Unit.HOURS), "zeppelin", P)


def test_band_fuzz_scaling_is_relative():
    one = modifier_band(QuantityModifier(1, Unit.HOURS), P)
    two = modifier_band(QuantityModifier(2, Unit.HOURS), P)
    assert two.center_km == pytest.approx(2 * one.center_km)
    assert (two.support[1] - two.support[0]) == pytest.approx(
        2 * (one.support[1] - one.support[0]))
    assert (two.core[1] - two.core[0]) == pytest.approx(2 * (one.core[1] - one.core[0]))


def test_away_band_ring_radii():
    band = modifier_band(QuantityModifier(10, Unit.KM), P)
    assert band.core == (pytest.approx(9.75), pytest.approx(10.25))
    assert band.support == (pytest.approx(9.5), pytest.approx(10.5))


# ── between ──────────────────────────────────────────────

def test_between_stacked_boxes_core_uses_shorter_edge():
    a = box(10, 0, 11, 4)
    b = box(0, 0, 1, 2)
    fr = geocode_between(a, b, P)
    got = fr.core.bbox()
    assert got.min_lat == pytest.approx(1.0, abs=1e-9)
    assert got.max_lat == pytest.approx(10.0, abs=1e-9)
    assert got.min_lon == pytest.approx(0.0, abs=1e-9)
    assert got.max_lon == pytest.approx(2.0, abs=1e-9)


def test_between_is_symmetric_in_argument_order():
    a = box(10, 0, 11, 4)
    b = box(0, 0, 1, 2)
    ab = geocode_between(a, b, P)
    ba = geocode_between(b, a, P)
    assert regions_allclose(ab.core, ba.core, tol_deg=1e-9)
    assert regions_allclose(ab.support, ba.support, tol_deg=1e-9)


def test_between_overlapping_anchors_rejected():
    with pytest.raises(OverlappingAnchorsError):
        geocode_between(box(0, 0, 2, 2), box(1, 1, 3, 3), P)
    with pytest.raises(OverlappingAnchorsError):
        geocode_between(box(0, 0, 1, 1), box(1, 0, 2, 1), P)  # touching


def test_between_cross_extent_matches_oracle_on_random_pairs():
    rng = np.random.default_rng(101)
    for _ in range(200):
        ta, tb = random_disjoint_box_pair(rng)
        a, b = box(*ta), box(*tb)
        center_lat = (min(ta[0], tb[0]) + max(ta[2], tb[2])) / 2.0
        axis, edge_km, owner = shorter_facing_edge_km(
            ta, tb, KM_PER_DEG, math.cos(math.radians(center_lat)))
        fr = geocode_between(a, b, P)
        core = fr.core.bbox()
        owner_box = ta if owner == "a" else tb
        if axis == "lat":
            assert core.min_lon == pytest.approx(owner_box[1], abs=1e-9)
            assert core.max_lon == pytest.approx(owner_box[3], abs=1e-9)
        else:
            assert core.min_lat == pytest.approx(owner_box[0], abs=1e-9)
            assert core.max_lat == pytest.approx(owner_box[2], abs=1e-9)


def test_between_complex_anchors_stay_inside_hull():
    # an L-shaped anchor and a box
    l_shape = Region.from_ring([(0, 0), (0, 3), (1, 3), (1, 1), (3, 1), (3, 0)])
    b = box(6, 0, 7, 2)
    fr = geocode_between(l_shape, b, P)
    hull = geom.convex_hull(np.vstack([l_shape.exterior_vertices(),
                                       b.exterior_vertices()]))
    rng = np.random.default_rng(5)
    pts = random_points_in(fr.support, 500, rng)
    assert geom._contains_with_tol(hull, pts[:, 0], pts[:, 1], eps_km=0.01).all()


# ── cardinal ─────────────────────────────────────────────

def test_cardinal_south_core_strictly_below_anchor():
    fr = geocode_cardinal("south", OHIO, None, P)
    rng = np.random.default_rng(0)
    pts = random_points_in(fr.core, 1000, rng)
    assert (pts[:, 0] < 38.40).all()


def test_cardinal_each_direction_is_sound():
    rng = np.random.default_rng(1)
    anchor = box(10, 20, 12, 23)
    for direction, axis, sense, bound in (
            ("south", 0, -1, 10.0), ("north", 0, 1, 12.0),
            ("west", 1, -1, 20.0), ("east", 1, 1, 23.0)):
        fr = geocode_cardinal(direction, anchor, None, P)
        pts = random_points_in(fr.core, 300, rng)
        if sense < 0:
            assert (pts[:, axis] < bound).all()
        else:
            assert (pts[:, axis] > bound).all()


def test_cardinal_point_due_north_is_core():
    anchor = box(10, 20, 12, 23)
    fr = geocode_cardinal("north", anchor, None, P)
    p = GeoPoint(12.0 + 1.0 / KM_PER_DEG, 21.5)  # 1 km due north of the edge
    assert membership(fr, p) == 1.0


def test_cardinal_with_modifier_band_distance():
    fr = geocode_cardinal("south", OHIO, QuantityModifier(6, Unit.HOURS), P)
    rng = np.random.default_rng(2)
    band = modifier_band(QuantityModifier(6, Unit.HOURS), P)
    tol = 0.006 * band.support[1]  # ring discretization sag
    pts = random_points_in(fr.support, 400, rng)
    d = geom.distance_to_region_km(OHIO, pts[:, 0], pts[:, 1])
    assert (d >= band.support[0] - tol).all()
    assert (d <= band.support[1] + tol).all()
    core_pts = random_points_in(fr.core, 400, rng)
    dc = geom.distance_to_region_km(OHIO, core_pts[:, 0], core_pts[:, 1])
    assert (dc >= band.core[0] - tol).all()
    assert (dc <= band.core[1] + tol).all()


def test_cardinal_range_cap_applies():
    fr = geocode_cardinal("south", OHIO, None, P)
    b = fr.core.bbox()
    # practical range 2000 km below the bottom edge
    assert b.min_lat >= 38.40 - (2000.0 / KM_PER_DEG) - 0.01
    full = geocode_cardinal("south", OHIO, None,
                            SemanticParams(practical_range_km=None))
    assert full.core.bbox().min_lat == pytest.approx(-90.0, abs=1e-6)


def test_cardinal_invalid_direction():
    with pytest.raises(SemanticsError):
        geocode_cardinal("up", OHIO, None, P)


# ── away_from ────────────────────────────────────────────

def test_away_from_requires_modifier():
    with pytest.raises(MissingModifierError):
        geocode_away_from(OHIO, None, P)


def test_away_from_ring_radii_and_hole():
    anchor = box(39.9, -83.1, 40.1, -82.9)
    fr = geocode_away_from(anchor, QuantityModifier(10, Unit.KM), P)
    assert membership(fr, anchor.centroid()) == 0.0
    rng = np.random.default_rng(3)
    pts = random_points_in(fr.core, 300, rng)
    d = geom.distance_to_region_km(anchor, pts[:, 0], pts[:, 1])
    assert (d >= 9.75 - 0.2).all() and (d <= 10.25 + 0.2).all()


def test_away_from_time_modifier_converts_via_speed():
    anchor = box(0, 0, 0.01, 0.01)
    fr = geocode_away_from(anchor, QuantityModifier(30, Unit.MINUTES), P)
    rng = np.random.default_rng(4)
    pts = random_points_in(fr.support, 200, rng)
    d = geom.distance_to_region_km(anchor, pts[:, 0], pts[:, 1])
    assert d.mean() == pytest.approx(48.28, rel=0.05)


# ── containment ──────────────────────────────────────────

def test_in_core_is_the_anchor_itself():
    fr = geocode_containment(RelationKind.IN, OHIO, P)
    assert regions_allclose(fr.core, OHIO)
    assert membership(fr, OHIO.centroid()) == 1.0


def test_outside_excludes_anchor_and_reaches_one_char_length():
    fr = geocode_containment(RelationKind.OUTSIDE, OHIO, P)
    assert membership(fr, OHIO.centroid()) == 0.0
    char = OHIO.bbox().diagonal_km()
    north = OHIO.bbox().max_lat + char / KM_PER_DEG  # 1 characteristic length out
    assert membership(fr, GeoPoint(north, -82.6)) == 1.0


# ── near ─────────────────────────────────────────────────

def test_near_core_radius_scales_with_anchor_size():
    big = box(0, 0, 100 / KM_PER_DEG, 100 / KM_PER_DEG)     # ~100 km wide
    small = box(0, 0, 1 / KM_PER_DEG, 1 / KM_PER_DEG)       # ~1 km wide
    fr_big = geocode_near(big, P)
    fr_small = geocode_near(small, P)
    # reach measured from the shared corner at (0, 0) toward the south
    reach_big = -fr_big.core.bbox().min_lat * KM_PER_DEG
    reach_small = -fr_small.core.bbox().min_lat * KM_PER_DEG
    assert reach_big / reach_small == pytest.approx(100.0, rel=0.01)


def test_near_anchor_interior_is_core_and_far_point_is_not():
    anchor = box(10, 10, 10.1, 10.1)
    fr = geocode_near(anchor, P)
    assert membership(fr, GeoPoint(10.05, 10.05)) == 1.0
    char = anchor.bbox().diagonal_km()
    far = GeoPoint(10.05 + 10 * char / KM_PER_DEG, 10.05)
    assert membership(fr, far) == 0.0


def test_near_modifier_overrides_radius():
    anchor = box(0, 0, 0.02, 0.02)
    fr = geocode_near(anchor, P, modifier=QuantityModifier(5, Unit.KM))
    rng = np.random.default_rng(8)
    pts = random_points_in(fr.core, 200, rng)
    d = geom.distance_to_region_km(anchor, pts[:, 0], pts[:, 1])
    assert d.max() <= 5.0 + 0.1


# ── part-of ──────────────────────────────────────────────

def test_part_north_is_upper_half_clipped_to_anchor():
    fr = geocode_part("north", OHIO, P)
    b = fr.core.bbox()
    mid = (38.40 + 42.32) / 2
    assert b.min_lat == pytest.approx(mid, abs=1e-9)
    assert b.max_lat == pytest.approx(42.32, abs=1e-9)


def test_part_opposite_slices_have_disjoint_interiors():
    north = geocode_part("north", OHIO, P)
    south = geocode_part("south", OHIO, P)
    overlap = geom.region_intersection(north.core, south.core)
    assert overlap.is_empty or overlap.area_km2() < 1e-6


def test_part_north_edge_point_is_core():
    fr = geocode_part("north", OHIO, P)
    assert membership(fr, GeoPoint(42.32, -82.6)) == 1.0


def test_part_support_widens_past_the_cut_line():
    fr = geocode_part("north", OHIO, P)
    mid = (38.40 + 42.32) / 2
    just_south_of_cut = GeoPoint(mid - 0.05, -82.6)
    assert membership(fr, just_south_of_cut) > 0.0
    assert membership(fr, just_south_of_cut) < 1.0


# ── along / with / among ─────────────────────────────────

def _line(*pts):
    return np.asarray(pts, dtype=np.float64)


def test_along_contact_and_lateral_falloff():
    line = _line((0.0, 0.0), (0.0, 0.9))
    fr = geocode_along(line, P)
    assert membership(fr, GeoPoint(0.0, 0.45)) == 1.0
    lateral = GeoPoint(2 * P.corridor_km / KM_PER_DEG, 0.45)
    assert membership(fr, lateral) == 0.0


def test_along_corridor_area_is_analytic():
    length = 100.0
    line = _line((0.0, 0.0), (length / KM_PER_DEG, 0.0))
    fr = geocode_along(line, P)
    expected = 2 * length * P.corridor_km + math.pi * P.corridor_km ** 2
    assert fr.core.area_km2() == pytest.approx(expected, rel=0.01)


def test_along_rejects_short_input():
    with pytest.raises(KindMismatchError):
        geocode_along(_line((0.0, 0.0)), P)


def test_with_identical_anchor_core_is_that_anchor():
    a = box(5, 5, 6, 6)
    fr = geocode_with(a, a, P)
    assert regions_allclose(fr.core, a)
    assert membership(fr, a.centroid()) == 1.0


def test_with_two_boxes_hull_contains_both_centroids():
    a = box(0, 0, 1, 1)
    b = box(0, 10, 1, 11)
    fr = geocode_with(a, b, P)
    assert membership(fr, a.centroid()) == 1.0
    assert membership(fr, b.centroid()) == 1.0


def test_among_triangle_of_points():
    pts = [Region.from_ring([(0, 0)] * 4), Region.from_ring([(0, 4)] * 4),
           Region.from_ring([(3, 2)] * 4)]
    fr = geocode_among(pts, P)
    assert membership(fr, GeoPoint(1.0, 2.0)) == 1.0  # triangle interior


def test_among_excludes_anchor_areas():
    boxes = [box(0, 0, 1, 1), box(0, 5, 1, 6), box(5, 0, 6, 1), box(5, 5, 6, 6)]
    fr = geocode_among(boxes, P)
    for b in boxes:
        assert membership(fr, b.centroid()) == 0.0
    rng = np.random.default_rng(6)
    pts = random_points_in(fr.core, 400, rng)
    hull = geom.convex_hull(np.vstack([b.exterior_vertices() for b in boxes]))
    assert geom._contains_with_tol(hull, pts[:, 0], pts[:, 1], eps_km=0.01).all()
    for b in boxes:
        assert not region_contains(b, pts[:, 0], pts[:, 1]).any()


def test_among_needs_three_anchors():
    with pytest.raises(SemanticsError):
        geocode_among([box(0, 0, 1, 1), box(2, 2, 3, 3)], P)


# ── expression-level geocode ─────────────────────────────

def test_geocode_in_ohio_core_is_ohio(gaz):
    expr = parse("in Ohio", gaz.names())
    fr = geocode(expr, gaz)
    assert regions_allclose(fr.core, OHIO)


def test_geocode_composition_shrinks_support(gaz):
    # crow-flies at 60 km/h keeps the 6-hour band within reach of Asheville
    params = SemanticParams(speed_kmh={"car": 60.0})
    single = geocode(parse("6 hours south of Ohio", gaz.names()), gaz, params)
    near = geocode(parse("near Asheville", gaz.names()), gaz, params)
    composed = geocode(parse("6 hours south of Ohio near Asheville", gaz.names()),
                       gaz, params)
    assert not composed.is_empty
    rng = np.random.default_rng(12)
    pts = random_points_in(composed.support, 500, rng)
    assert geom._contains_with_tol(single.support, pts[:, 0], pts[:, 1], eps_km=0.01).all()
    assert geom._contains_with_tol(near.support, pts[:, 0], pts[:, 1], eps_km=0.01).all()
    assert composed.support.area_km2() < single.support.area_km2()
    assert composed.support.area_km2() < near.support.area_km2()


def test_geocode_between_order_invariance(gaz):
    ab = geocode(parse("between Walmart and Sam's Club", gaz.names()), gaz)
    ba = geocode(parse("between Sam's Club and Walmart", gaz.names()), gaz)
    assert regions_allclose(ab.core, ba.core, tol_deg=1e-9)
    assert regions_allclose(ab.support, ba.support, tol_deg=1e-9)


def test_geocode_empty_intersection_warns(gaz):
    warnings = []
    fr = geocode(parse("in Ohio near Asheville", gaz.names()), gaz, warnings=warnings)
    assert fr.is_empty
    assert any("empty intersection" in w for w in warnings)


def test_geocode_kind_mismatch_for_along_on_area(gaz):
    with pytest.raises(KindMismatchError):
        geocode(parse("along Ohio", gaz.names()), gaz)


def test_geocode_in_on_line_anchor_is_kind_mismatch(gaz):
    with pytest.raises(KindMismatchError):
        geocode(parse("in Scioto River", gaz.names()), gaz)


def test_geocode_along_river_works(gaz):
    fr = geocode(parse("along Scioto River", gaz.names()), gaz)
    assert membership(fr, GeoPoint(39.96, -83.00)) == 1.0


def test_geocode_point_anchor_near(gaz):
    fr = geocode(parse("near Columbus Fountain", gaz.names()), gaz)
    assert membership(fr, GeoPoint(39.959, -82.999)) == 1.0


def test_geocode_size_order_warning_flows_through(gaz):
    warnings = []
    geocode(parse("Ohio in our office", gaz.names()), gaz, warnings=warnings)
    assert any("size ordering" in w for w in warnings)


def test_geocode_deterministic_bytes(gaz):
    expr = parse("6 hours south of Ohio near Asheville", gaz.names())
    out1 = canonical_json(fuzzy_region_to_feature_collection(geocode(expr, gaz), expr, P))
    out2 = canonical_json(fuzzy_region_to_feature_collection(geocode(expr, gaz), expr, P))
    assert out1 == out2


def test_membership_between_zero_and_one_in_band(gaz):
    fr = geocode(parse("near Asheville", gaz.names()), gaz)
    rng = np.random.default_rng(13)
    pts = random_points_in(geom.region_difference(fr.support, fr.core), 200, rng)
    mu = membership_many(fr, pts[:, 0], pts[:, 1])
    interior = (geom.boundary_distance_km(fr.support, pts[:, 0], pts[:, 1]) > 0.05) \
        & (geom.boundary_distance_km(fr.core, pts[:, 0], pts[:, 1]) > 0.05)
    assert (mu[interior] > 0.0).all()
    assert (mu[interior] < 1.0).all()
