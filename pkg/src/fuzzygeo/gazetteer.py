"""Anchor-object store: load GeoJSON gazetteers, resolve names, optional
remote boundary lookup behind an explicit client interface.

A gazetteer is immutable after load; remote fetches return a new snapshot
(copy-on-write) so concurrent readers never observe mutation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

import numpy as np

from .errors import (
    DuplicateNameError,
    GazetteerError,
    RemoteLookupError,
    UnknownAnchorError,
)
from .geom import (
    BoundingBox,
    GeoPoint,
    Region,
    _region_to_shapely_deg,
    region_from_geojson,
    region_to_geojson,
)

AREA = "area"
LINE = "line"
POINT = "point"


@dataclass(frozen=True)
class AnchorObject:
    """A named toponym with a quantitative spatial extent."""

    name: str
    kind: str  # area | line | point
    region: Region | None = None          # area kind
    line: np.ndarray | None = None        # line kind, (n, 2) lat-first
    point: GeoPoint | None = None         # point kind
    aliases: tuple[str, ...] = ()
    source: str = ""

    def bbox(self) -> BoundingBox:
        if self.kind == AREA:
            return self.region.bbox()
        if self.kind == LINE:
            return BoundingBox(self.line[:, 0].min(), self.line[:, 1].min(),
                               self.line[:, 0].max(), self.line[:, 1].max())
        return BoundingBox(self.point.lat, self.point.lon, self.point.lat, self.point.lon)

    def extent_region(self) -> Region:
        """Region view of the extent; degenerate (zero-area) for points."""
        if self.kind == AREA:
            return self.region
        if self.kind == POINT:
            p = self.point
            return Region.from_ring(np.array([(p.lat, p.lon)] * 4))
        # a line doubles back on itself as a zero-area ring
        return Region.from_ring(np.vstack([self.line, self.line[::-1]]))

    def centroid(self) -> GeoPoint:
        if self.kind == AREA:
            return self.region.centroid()
        if self.kind == POINT:
            return self.point
        return GeoPoint(float(self.line[:, 0].mean()), float(self.line[:, 1].mean()))

    def geometry_geojson(self) -> dict:
        if self.kind == AREA:
            return region_to_geojson(self.region)
        if self.kind == LINE:
            return {"type": "LineString",
                    "coordinates": [[float(p[1]), float(p[0])] for p in self.line]}
        return {"type": "Point", "coordinates": [self.point.lon, self.point.lat]}


def _line_array(coords) -> np.ndarray:
    arr = np.asarray([(c[1], c[0]) for c in coords], dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 2:
        raise GazetteerError("LineString needs >= 2 coordinates")
    arr.setflags(write=False)
    return arr


def anchor_from_feature(feature: dict, source: str = "") -> AnchorObject:
    props = feature.get("properties") or {}
    name = props.get("name")
    if not name or not isinstance(name, str):
        raise GazetteerError("feature missing a string 'name' property")
    aliases = tuple(props.get("aliases") or ())
    geom = feature.get("geometry") or {}
    gtype = geom.get("type")
    if gtype in ("Polygon", "MultiPolygon"):
        region = region_from_geojson(geom)
        shp = _region_to_shapely_deg(region)
        if not shp.is_valid:
            raise GazetteerError(f"invalid polygon geometry for {name!r}")
        return AnchorObject(name, AREA, region=region, aliases=aliases, source=source)
    if gtype == "LineString":
        return AnchorObject(name, LINE, line=_line_array(geom["coordinates"]),
                            aliases=aliases, source=source)
    if gtype == "Point":
        lon, lat = geom["coordinates"][:2]
        return AnchorObject(name, POINT, point=GeoPoint(lat, lon),
                            aliases=aliases, source=source)
    raise GazetteerError(f"unsupported geometry type {gtype!r} for {name!r}")


def _levenshtein(a: str, b: str, cap: int = 3) -> int:
    if abs(len(a) - len(b)) > cap:
        return cap + 1
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        if min(cur) > cap:
            return cap + 1
        prev = cur
    return prev[-1]


@dataclass(frozen=True)
class Gazetteer:
    entries: tuple[AnchorObject, ...] = ()
    _by_name: dict = field(default_factory=dict, repr=False)
    _by_folded: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        by_name: dict[str, AnchorObject] = {}
        by_folded: dict[str, AnchorObject] = {}
        for e in self.entries:
            for key in (e.name, *e.aliases):
                if key in by_name:
                    raise DuplicateNameError(f"duplicate anchor name {key!r}")
                low = key.lower()
                if low in by_folded and by_folded[low] is not e:
                    raise DuplicateNameError(
                        f"name {key!r} collides case-insensitively with another entry")
                by_name[key] = e
                by_folded[low] = e
        object.__setattr__(self, "_by_name", by_name)
        object.__setattr__(self, "_by_folded", by_folded)

    def __len__(self) -> int:
        return len(self.entries)

    def names(self) -> set[str]:
        """All resolvable surface names (primary names and aliases)."""
        return set(self._by_name)

    def resolve(self, name: str, warnings: list[str] | None = None) -> AnchorObject:
        hit = self._by_name.get(name)
        if hit is not None:
            return hit
        hit = self._by_folded.get(name.lower())
        if hit is not None:
            if warnings is not None:
                warnings.append(f"anchor {name!r} resolved case-insensitively as {hit.name!r}")
            return hit
        near = sorted(n for n in self._by_name if _levenshtein(name, n) <= 2)
        raise UnknownAnchorError(name, near)

    def with_entry(self, anchor: AnchorObject) -> "Gazetteer":
        return Gazetteer(self.entries + (anchor,))


def load(path: str | Path) -> Gazetteer:
    path = Path(path)
    text = path.read_text(encoding="utf-8")  # unreadable file: plain OSError
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GazetteerError(f"malformed gazetteer {path}: {exc}") from exc
    return from_feature_collection(data, source=str(path))


def from_feature_collection(data: dict, source: str = "") -> Gazetteer:
    if not isinstance(data, dict) or data.get("type") != "FeatureCollection":
        raise GazetteerError("gazetteer must be a GeoJSON FeatureCollection")
    entries = tuple(anchor_from_feature(f, source) for f in data.get("features", []))
    return Gazetteer(entries)


def save(gaz: Gazetteer, path: str | Path) -> None:
    fc = {
        "type": "FeatureCollection",
        "features": [
            {
                "type": "Feature",
                "properties": {"name": e.name, **({"aliases": list(e.aliases)} if e.aliases else {})},
                "geometry": e.geometry_geojson(),
            }
            for e in gaz.entries
        ],
    }
    Path(path).write_text(json.dumps(fc, ensure_ascii=False), encoding="utf-8")


# ── remote lookup ────────────────────────────────────────

class BoundaryClient(Protocol):
    """Directory lookup for toponym boundaries (e.g. a public map API).

    fetch(name) returns a list of candidate GeoJSON Features; raises
    RemoteLookupError("network disabled") style errors when offline.
    """

    def fetch(self, name: str) -> list[dict]: ...


def remote_fetch(gaz: Gazetteer, name: str, client: BoundaryClient) -> tuple[AnchorObject, Gazetteer]:
    """Fetch a boundary, convert it, and cache it into a new gazetteer snapshot.

    Never called implicitly by geocoding paths: resolution against the local
    gazetteer is the only lookup they perform.
    """
    candidates = client.fetch(name)
    if not candidates:
        raise RemoteLookupError(f"no result for {name!r}")
    if len(candidates) > 1:
        labels = [(c.get("properties") or {}).get("name", "?") for c in candidates]
        raise RemoteLookupError(
            f"ambiguous result for {name!r}: {len(candidates)} candidates", labels)
    anchor = anchor_from_feature(candidates[0], source="remote")
    if anchor.name != name:
        anchor = AnchorObject(name, anchor.kind, region=anchor.region, line=anchor.line,
                              point=anchor.point, aliases=(anchor.name,) + anchor.aliases,
                              source="remote")
    return anchor, gaz.with_entry(anchor)
