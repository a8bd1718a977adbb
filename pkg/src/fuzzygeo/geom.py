"""Geometry core on WGS84 coordinates.

Internal convention is lat-first, matching the bounding-box notation used
throughout the package; GeoJSON serialization swaps to [lon, lat] per RFC 7946.
Distances use a sphere of mean radius 6371.0088 km. Polygon construction runs
in a local equirectangular projection (km) centered on the geometry involved;
polygon set operations are delegated to shapely, while per-point evaluation
(containment masks, boundary distances, membership) runs through the
numba/numpy kernels.

Regions crossing the antimeridian or the poles are rejected outright.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import shapely
from shapely.geometry import (
    LineString,
    MultiPolygon,
    Point,
    Polygon,
)
from shapely.geometry.polygon import orient

from . import kernels
from .errors import (
    DegenerateGeometryError,
    InvalidAnnulusError,
    InvalidBufferError,
    InvalidCoordinateError,
    ProjectionError,
)
from .kernels import EARTH_RADIUS_KM, KM_PER_DEG

# Boundary tolerance for membership / containment checks: 1 mm.
BOUNDARY_EPS_KM = 1e-6
# Vertex comparison tolerance for region equality in tests.
VERTEX_TOL_DEG = 1e-9

_MAX_PROJECTION_LAT = 89.5


def _check_lat(lat: float) -> float:
    lat = float(lat)
    if not math.isfinite(lat) or not -90.0 <= lat <= 90.0:
        raise InvalidCoordinateError(f"latitude {lat!r} out of [-90, 90]")
    return lat


def _check_lon(lon: float) -> float:
    lon = float(lon)
    if not math.isfinite(lon) or not -180.0 <= lon <= 180.0:
        raise InvalidCoordinateError(f"longitude {lon!r} out of [-180, 180]")
    return lon


@dataclass(frozen=True)
class GeoPoint:
    lat: float
    lon: float

    def __post_init__(self):
        object.__setattr__(self, "lat", _check_lat(self.lat))
        object.__setattr__(self, "lon", _check_lon(self.lon))


@dataclass(frozen=True)
class BoundingBox:
    min_lat: float
    min_lon: float
    max_lat: float
    max_lon: float

    def __post_init__(self):
        for name in ("min_lat", "max_lat"):
            object.__setattr__(self, name, _check_lat(getattr(self, name)))
        for name in ("min_lon", "max_lon"):
            object.__setattr__(self, name, _check_lon(getattr(self, name)))
        if self.min_lat > self.max_lat or self.min_lon > self.max_lon:
            raise InvalidCoordinateError(
                f"bounding box not canonical: {self.as_tuple()}; use normalize_bbox"
            )

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.min_lat, self.min_lon, self.max_lat, self.max_lon)

    @property
    def center(self) -> GeoPoint:
        return GeoPoint((self.min_lat + self.max_lat) / 2.0,
                        (self.min_lon + self.max_lon) / 2.0)

    def diagonal_km(self) -> float:
        return geodesic_distance(GeoPoint(self.min_lat, self.min_lon),
                                 GeoPoint(self.max_lat, self.max_lon))

    def to_region(self) -> "Region":
        return Region.from_ring([
            (self.min_lat, self.min_lon),
            (self.min_lat, self.max_lon),
            (self.max_lat, self.max_lon),
            (self.max_lat, self.min_lon),
        ])


def normalize_bbox(raw) -> BoundingBox:
    """Canonicalize four degrees into (min_lat, min_lon, max_lat, max_lon).

    Accepts any corner-ordering convention: values are sorted per axis, so
    both [38.40, -84.82, 42.32, -80.51] and its swapped form normalize to the
    same box. Antimeridian-crossing intent cannot be expressed.
    """
    vals = [float(v) for v in raw]
    if len(vals) != 4:
        raise InvalidCoordinateError(f"expected 4 numbers, got {len(vals)}")
    a_lat, a_lon, b_lat, b_lon = vals
    a_lat, b_lat = _check_lat(a_lat), _check_lat(b_lat)
    a_lon, b_lon = _check_lon(a_lon), _check_lon(b_lon)
    return BoundingBox(min(a_lat, b_lat), min(a_lon, b_lon),
                       max(a_lat, b_lat), max(a_lon, b_lon))


def geodesic_distance(a: GeoPoint, b: GeoPoint) -> float:
    """Haversine distance in km on the mean-radius sphere."""
    return kernels.haversine_scalar(a.lat, a.lon, b.lat, b.lon)


# ── regions ──────────────────────────────────────────────

def _ring_array(points) -> np.ndarray:
    """(n, 2) float64 lat-first ring, closed, coordinates validated."""
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 3:
        raise DegenerateGeometryError(f"ring needs >= 3 (lat, lon) pairs, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidCoordinateError("non-finite ring coordinate")
    if arr[:, 0].min() < -90.0 or arr[:, 0].max() > 90.0:
        raise InvalidCoordinateError("ring latitude out of [-90, 90]")
    if arr[:, 1].min() < -180.0 or arr[:, 1].max() > 180.0:
        raise InvalidCoordinateError("ring longitude out of [-180, 180]")
    if not np.array_equal(arr[0], arr[-1]):
        arr = np.vstack([arr, arr[:1]])
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Region:
    """Zero or more polygons, each an exterior ring plus holes (lat-first)."""

    polygons: tuple[tuple[np.ndarray, tuple[np.ndarray, ...]], ...] = ()

    @staticmethod
    def empty() -> "Region":
        return Region(())

    @staticmethod
    def from_ring(exterior, holes=()) -> "Region":
        ext = _ring_array(exterior)
        hs = tuple(_ring_array(h) for h in holes)
        return Region(((ext, hs),))

    @staticmethod
    def from_bbox(bbox: BoundingBox) -> "Region":
        return bbox.to_region()

    @property
    def is_empty(self) -> bool:
        return not self.polygons

    def bbox(self) -> BoundingBox:
        if self.is_empty:
            raise DegenerateGeometryError("empty region has no bounding box")
        exts = np.vstack([ext for ext, _ in self.polygons])
        return BoundingBox(exts[:, 0].min(), exts[:, 1].min(),
                           exts[:, 0].max(), exts[:, 1].max())

    def exterior_vertices(self) -> np.ndarray:
        """All exterior-ring vertices, closing duplicates dropped."""
        if self.is_empty:
            return np.empty((0, 2))
        return np.vstack([ext[:-1] for ext, _ in self.polygons])

    def rings(self):
        for ext, holes in self.polygons:
            yield ext
            yield from holes

    def is_rectangle(self, tol: float = VERTEX_TOL_DEG) -> bool:
        """True when the region is a single hole-free axis-aligned box."""
        if len(self.polygons) != 1:
            return False
        ext, holes = self.polygons[0]
        if holes or len(ext) != 5:
            return False
        b = self.bbox()
        lats = sorted(set(np.round(ext[:-1, 0] / tol) * tol))
        lons = sorted(set(np.round(ext[:-1, 1] / tol) * tol))
        return (len(lats) == 2 and len(lons) == 2
                and abs(lats[0] - b.min_lat) <= tol and abs(lats[1] - b.max_lat) <= tol
                and abs(lons[0] - b.min_lon) <= tol and abs(lons[1] - b.max_lon) <= tol)

    def centroid(self) -> GeoPoint:
        if self.is_empty:
            raise DegenerateGeometryError("empty region has no centroid")
        geom = _region_to_shapely_deg(self)
        c = geom.centroid
        if c.is_empty:  # zero-area degenerate
            v = self.exterior_vertices()
            return GeoPoint(float(v[:, 0].mean()), float(v[:, 1].mean()))
        return GeoPoint(c.y, c.x)

    def area_km2(self) -> float:
        if self.is_empty:
            return 0.0
        proj = projection_for(self)
        return float(_region_to_shapely(self, proj).area)


@dataclass(frozen=True)
class FuzzyRegion:
    """Core (membership 1) nested in a support (membership > 0), linear decay."""

    core: Region
    support: Region
    decay: str = "linear"

    def __post_init__(self):
        if self.decay != "linear":
            raise ValueError(f"unsupported decay {self.decay!r}")
        if not self.core.is_empty:
            if self.support.is_empty:
                raise DegenerateGeometryError("non-empty core with empty support")
            verts = self.core.exterior_vertices()
            ok = _contains_with_tol(self.support, verts[:, 0], verts[:, 1])
            if not ok.all():
                raise DegenerateGeometryError("core vertex outside support")

    @staticmethod
    def empty() -> "FuzzyRegion":
        return FuzzyRegion(Region.empty(), Region.empty())

    @staticmethod
    def crisp(region: Region) -> "FuzzyRegion":
        return FuzzyRegion(region, region)

    @property
    def is_empty(self) -> bool:
        return self.support.is_empty


# ── local projection ─────────────────────────────────────

@dataclass(frozen=True)
class LocalProjection:
    """Equirectangular plane in km around (lat0, lon0)."""

    lat0: float
    lon0: float
    kx: float = field(init=False)

    def __post_init__(self):
        if abs(self.lat0) > _MAX_PROJECTION_LAT:
            raise ProjectionError(f"projection center too close to a pole: lat {self.lat0}")
        object.__setattr__(self, "kx", KM_PER_DEG * math.cos(math.radians(self.lat0)))

    def to_xy(self, lats, lons):
        x = (np.asarray(lons, dtype=np.float64) - self.lon0) * self.kx
        y = (np.asarray(lats, dtype=np.float64) - self.lat0) * KM_PER_DEG
        return x, y

    def to_ll(self, xs, ys):
        lat = np.asarray(ys, dtype=np.float64) / KM_PER_DEG + self.lat0
        lon = np.asarray(xs, dtype=np.float64) / self.kx + self.lon0
        return lat, lon

    def world_rect(self) -> Polygon:
        """The valid lat/lon box in this plane; constructions clip to it."""
        xs, ys = self.to_xy([-90.0, 90.0], [-180.0, 180.0])
        return shapely.box(xs[0], ys[0], xs[1], ys[1])


def projection_for(*regions: Region) -> LocalProjection:
    """Shared projection centered on the combined bounding box of the inputs."""
    boxes = [r.bbox() for r in regions if not r.is_empty]
    if not boxes:
        return LocalProjection(0.0, 0.0)
    min_lat = min(b.min_lat for b in boxes)
    max_lat = max(b.max_lat for b in boxes)
    min_lon = min(b.min_lon for b in boxes)
    max_lon = max(b.max_lon for b in boxes)
    lat0 = (min_lat + max_lat) / 2.0
    lat0 = max(-_MAX_PROJECTION_LAT, min(_MAX_PROJECTION_LAT, lat0))
    return LocalProjection(lat0, (min_lon + max_lon) / 2.0)


# ── shapely bridge ───────────────────────────────────────

def _ring_xy(ring: np.ndarray, proj: LocalProjection):
    x, y = proj.to_xy(ring[:, 0], ring[:, 1])
    return list(zip(x, y))


def _polygon_to_shapely(ext, holes, proj: LocalProjection):
    shell = _ring_xy(ext, proj)
    poly = Polygon(shell, [_ring_xy(h, proj) for h in holes])
    if poly.is_valid and poly.area > 0.0:
        return poly
    # degenerate input (point-box or collinear ring): collapse honestly
    pts = shapely.MultiPoint(shell)
    hull = pts.convex_hull  # Point, LineString, or Polygon
    return hull if not hull.is_empty else Point(shell[0])

def _region_to_shapely(region: Region, proj: LocalProjection):
    if region.is_empty:
        return Polygon()
    parts = [_polygon_to_shapely(ext, holes, proj) for ext, holes in region.polygons]
    if len(parts) == 1:
        return parts[0]
    return shapely.union_all(parts)


def _region_to_shapely_deg(region: Region):
    """Raw-degree shapely geometry (x=lon, y=lat); for topology-only uses."""
    parts = []
    for ext, holes in region.polygons:
        shell = [(p[1], p[0]) for p in ext]
        parts.append(Polygon(shell, [[(p[1], p[0]) for p in h] for h in holes]))
    if not parts:
        return Polygon()
    return parts[0] if len(parts) == 1 else MultiPolygon(parts)


def _shapely_to_region(geom, proj: LocalProjection) -> Region:
    """Back to lat/lon, clipped to the valid world box, canonically ordered."""
    if geom.is_empty:
        return Region.empty()
    geom = geom.intersection(proj.world_rect())
    polys = []
    for part in _iter_polygons(geom):
        if part.area <= 0.0:
            continue
        part = orient(part, sign=1.0)
        polys.append(part)
    if not polys:
        return Region.empty()
    combined = polys[0] if len(polys) == 1 else MultiPolygon(polys)
    combined = combined.normalize()

    def ring_to_ll(coords):
        arr = np.asarray(coords, dtype=np.float64)
        lat, lon = proj.to_ll(arr[:, 0], arr[:, 1])
        lat = np.clip(lat, -90.0, 90.0)
        lon = np.clip(lon, -180.0, 180.0)
        return np.column_stack([lat, lon])

    out = []
    for part in _iter_polygons(combined):
        ext = _ring_array(ring_to_ll(part.exterior.coords))
        holes = tuple(_ring_array(ring_to_ll(h.coords)) for h in part.interiors)
        out.append((ext, holes))
    return Region(tuple(out))


def _iter_polygons(geom):
    if geom.is_empty:
        return
    if isinstance(geom, Polygon):
        yield geom
    elif isinstance(geom, MultiPolygon):
        yield from geom.geoms
    elif hasattr(geom, "geoms"):  # GeometryCollection: keep areal parts only
        for g in geom.geoms:
            yield from _iter_polygons(g)


# ── region operations ────────────────────────────────────

def buffer_region(region: Region, d_km: float) -> Region:
    """Expand exteriors outward by d_km (holes shrink, vanishing if consumed)."""
    if d_km < 0.0:
        raise InvalidBufferError(f"negative buffer distance {d_km}")
    if d_km == 0.0 or region.is_empty:
        return region
    proj = projection_for(region)
    geom = _region_to_shapely(region, proj)
    return _shapely_to_region(geom.buffer(d_km), proj)


def convex_hull(points) -> Region:
    """Minimal convex region containing all points (GeoPoints or (lat, lon))."""
    pts = [(p.lat, p.lon) if isinstance(p, GeoPoint) else (float(p[0]), float(p[1])) for p in points]
    if len(pts) < 3:
        raise DegenerateGeometryError(f"convex hull needs >= 3 points, got {len(pts)}")
    for lat, lon in pts:
        _check_lat(lat)
        _check_lon(lon)
    hull = shapely.MultiPoint([(lon, lat) for lat, lon in pts]).convex_hull
    if not isinstance(hull, Polygon) or hull.area == 0.0:
        raise DegenerateGeometryError("points are collinear; hull is degenerate")
    hull = orient(hull.normalize(), sign=1.0)
    ring = [(y, x) for x, y in hull.exterior.coords]
    return Region.from_ring(ring)


def region_intersection(a: Region, b: Region) -> Region:
    if a.is_empty or b.is_empty:
        return Region.empty()
    proj = projection_for(a, b)
    ga = _region_to_shapely(a, proj)
    gb = _region_to_shapely(b, proj)
    return _shapely_to_region(ga.intersection(gb), proj)


def region_difference(a: Region, b: Region) -> Region:
    if a.is_empty:
        return Region.empty()
    if b.is_empty:
        return a
    proj = projection_for(a, b)
    ga = _region_to_shapely(a, proj)
    gb = _region_to_shapely(b, proj)
    return _shapely_to_region(ga.difference(gb), proj)


def region_union(a: Region, b: Region) -> Region:
    if a.is_empty:
        return b
    if b.is_empty:
        return a
    proj = projection_for(a, b)
    return _shapely_to_region(
        _region_to_shapely(a, proj).union(_region_to_shapely(b, proj)), proj)


def annulus(center: Region, inner_km: float, outer_km: float) -> Region:
    """buffer(center, outer) minus buffer(center, inner); the hole covers center."""
    if inner_km < 0.0 or inner_km >= outer_km:
        raise InvalidAnnulusError(f"need 0 <= inner < outer, got ({inner_km}, {outer_km})")
    outer = buffer_region(center, outer_km)
    inner = buffer_region(center, inner_km)
    return region_difference(outer, inner)


def intersect_fuzzy(a: FuzzyRegion, b: FuzzyRegion) -> FuzzyRegion:
    """Constraint composition: min-style fuzzy AND via core/support intersection."""
    support = region_intersection(a.support, b.support)
    if support.is_empty:
        return FuzzyRegion.empty()
    core = region_intersection(a.core, b.core)
    return FuzzyRegion(core, support)


# ── per-point evaluation (kernel-backed) ─────────────────

def region_contains(region: Region, lats, lons) -> np.ndarray:
    """Even-odd containment mask; boundary points are not guaranteed either way."""
    lats = np.atleast_1d(np.asarray(lats, dtype=np.float64))
    lons = np.atleast_1d(np.asarray(lons, dtype=np.float64))
    inside = np.zeros(lats.shape[0], dtype=bool)
    for ext, holes in region.polygons:
        in_ext = kernels.points_in_ring(lons, lats, ext[:, 1], ext[:, 0])
        for h in holes:
            in_ext &= ~kernels.points_in_ring(lons, lats, h[:, 1], h[:, 0])
        inside |= in_ext
    return inside


def _segments_xy(region: Region, proj: LocalProjection):
    ax, ay, bx, by = [], [], [], []
    for ring in region.rings():
        x, y = proj.to_xy(ring[:, 0], ring[:, 1])
        ax.append(x[:-1])
        ay.append(y[:-1])
        bx.append(x[1:])
        by.append(y[1:])
    return (np.concatenate(ax), np.concatenate(ay),
            np.concatenate(bx), np.concatenate(by))


def boundary_distance_km(region: Region, lats, lons,
                         proj: LocalProjection | None = None) -> np.ndarray:
    """Distance from each point to the region's boundary rings (0 on boundary)."""
    lats = np.atleast_1d(np.asarray(lats, dtype=np.float64))
    lons = np.atleast_1d(np.asarray(lons, dtype=np.float64))
    if region.is_empty:
        return np.full(lats.shape[0], np.inf)
    proj = proj or projection_for(region)
    ax, ay, bx, by = _segments_xy(region, proj)
    px, py = proj.to_xy(lats, lons)
    return kernels.min_dist_to_segments(np.ascontiguousarray(px), np.ascontiguousarray(py),
                                        ax, ay, bx, by)


def distance_to_region_km(region: Region, lats, lons) -> np.ndarray:
    """0 inside the region, else distance to its boundary."""
    lats = np.atleast_1d(np.asarray(lats, dtype=np.float64))
    lons = np.atleast_1d(np.asarray(lons, dtype=np.float64))
    if region.is_empty:
        return np.full(lats.shape[0], np.inf)
    d = boundary_distance_km(region, lats, lons)
    d[region_contains(region, lats, lons)] = 0.0
    return d


def _contains_with_tol(region: Region, lats, lons, eps_km: float = BOUNDARY_EPS_KM) -> np.ndarray:
    inside = region_contains(region, lats, lons)
    if inside.all() or region.is_empty:
        return inside
    near = boundary_distance_km(region, lats, lons) <= eps_km
    return inside | near


def membership_many(fr: FuzzyRegion, lats, lons) -> np.ndarray:
    """Graded membership: 1 in core, 0 outside support, linear decay between.

    In the decay band the grade is d_support / (d_core + d_support), the
    fractional position of the point between the core and the support edge.
    With an empty core the band has no inner anchor; membership is flat 0.5.
    """
    lats = np.atleast_1d(np.asarray(lats, dtype=np.float64))
    lons = np.atleast_1d(np.asarray(lons, dtype=np.float64))
    mu = np.zeros(lats.shape[0], dtype=np.float64)
    if fr.support.is_empty:
        return mu
    proj = projection_for(fr.support)
    in_support = region_contains(fr.support, lats, lons)
    d_sup = boundary_distance_km(fr.support, lats, lons, proj)
    in_support |= d_sup <= BOUNDARY_EPS_KM
    if not in_support.any():
        return mu
    if fr.core.is_empty:
        mu[in_support] = 0.5
        return mu
    in_core = region_contains(fr.core, lats, lons)
    d_core = boundary_distance_km(fr.core, lats, lons, proj)
    in_core |= d_core <= BOUNDARY_EPS_KM
    mu[in_core] = 1.0
    band = in_support & ~in_core
    if band.any():
        dc = d_core[band]
        ds = d_sup[band]
        mu[band] = ds / (dc + ds)
    return mu


def membership(fr: FuzzyRegion, p: GeoPoint) -> float:
    return float(membership_many(fr, [p.lat], [p.lon])[0])


def random_points_in(region: Region, n: int, rng: np.random.Generator,
                     max_batches: int = 1000) -> np.ndarray:
    """(n, 2) lat-first interior points by rejection sampling in the bbox."""
    if region.is_empty or n == 0:
        return np.empty((0, 2))
    b = region.bbox()
    if b.max_lat == b.min_lat or b.max_lon == b.min_lon:
        return np.empty((0, 2))
    out = []
    have = 0
    for _ in range(max_batches):
        m = max(4 * (n - have), 256)
        lats = rng.uniform(b.min_lat, b.max_lat, m)
        lons = rng.uniform(b.min_lon, b.max_lon, m)
        mask = region_contains(region, lats, lons)
        if mask.any():
            out.append(np.column_stack([lats[mask], lons[mask]]))
            have += int(mask.sum())
        if have >= n:
            break
    if have < n:
        raise DegenerateGeometryError("rejection sampling failed; region too thin for its bbox")
    return np.vstack(out)[:n]


# ── equality and GeoJSON ─────────────────────────────────

def regions_allclose(a: Region, b: Region, tol_deg: float = VERTEX_TOL_DEG) -> bool:
    """Vertex-wise comparison after canonical normalization."""
    if a.is_empty or b.is_empty:
        return a.is_empty and b.is_empty
    ga = _region_to_shapely_deg(a).normalize()
    gb = _region_to_shapely_deg(b).normalize()
    pa = list(_iter_polygons(ga))
    pb = list(_iter_polygons(gb))
    if len(pa) != len(pb):
        return False
    for qa, qb in zip(pa, pb):
        ra = [np.asarray(qa.exterior.coords)] + [np.asarray(h.coords) for h in qa.interiors]
        rb = [np.asarray(qb.exterior.coords)] + [np.asarray(h.coords) for h in qb.interiors]
        if len(ra) != len(rb):
            return False
        for va, vb in zip(ra, rb):
            if va.shape != vb.shape or not np.allclose(va, vb, rtol=0.0, atol=tol_deg):
                return False
    return True


def region_to_geojson(region: Region) -> dict:
    """GeoJSON geometry with [lon, lat] coordinate order (internal is lat-first)."""
    def ring_coords(ring: np.ndarray):
        return [[float(p[1]), float(p[0])] for p in ring]

    coords = [[ring_coords(ext)] + [ring_coords(h) for h in holes]
              for ext, holes in region.polygons]
    if len(coords) == 1:
        return {"type": "Polygon", "coordinates": coords[0]}
    return {"type": "MultiPolygon", "coordinates": coords}


def region_from_geojson(geometry: dict) -> Region:
    gtype = geometry.get("type")
    coords = geometry.get("coordinates")
    if gtype == "Polygon":
        coords = [coords]
    elif gtype != "MultiPolygon":
        raise DegenerateGeometryError(f"expected Polygon/MultiPolygon, got {gtype!r}")
    polys = []
    for poly in coords:
        if not poly:
            continue
        rings = [np.asarray([(pt[1], pt[0]) for pt in ring], dtype=np.float64) for ring in poly]
        polys.append((_ring_array(rings[0]), tuple(_ring_array(r) for r in rings[1:])))
    return Region(tuple(polys))
