from __future__ import annotations

import json

import pytest

from fuzzygeo import kernels
from fuzzygeo.gazetteer import Gazetteer, load


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # JIT compilation happens here, outside any timed assertion
    kernels.warmup()


def _box(min_lon, min_lat, max_lon, max_lat):
    return {
        "type": "Polygon",
        "coordinates": [[
            [min_lon, min_lat], [max_lon, min_lat], [max_lon, max_lat],
            [min_lon, max_lat], [min_lon, min_lat],
        ]],
    }


FIXTURE_FEATURES = [
    {"type": "Feature", "properties": {"name": "Ohio"},
     "geometry": _box(-84.82, 38.40, -80.51, 42.32)},
    {"type": "Feature", "properties": {"name": "Asheville"},
     "geometry": _box(-82.67, 35.42, -82.45, 35.66)},
    {"type": "Feature", "properties": {"name": "Walmart"},
     "geometry": _box(-84.201, 39.760, -84.197, 39.763)},
    {"type": "Feature", "properties": {"name": "Sam's Club"},
     "geometry": _box(-84.202, 39.740, -84.196, 39.743)},
    {"type": "Feature", "properties": {"name": "Dayton, OH", "aliases": ["Dayton"]},
     "geometry": _box(-84.31, 39.68, -84.09, 39.87)},
    {"type": "Feature", "properties": {"name": "New York"},
     "geometry": _box(-79.76, 40.50, -71.85, 45.01)},
    {"type": "Feature", "properties": {"name": "New York City"},
     "geometry": _box(-74.26, 40.49, -73.70, 40.92)},
    {"type": "Feature", "properties": {"name": "the palace"},
     "geometry": _box(-83.01, 40.00, -82.99, 40.02)},
    {"type": "Feature", "properties": {"name": "our office"},
     "geometry": _box(-83.005, 40.005, -83.000, 40.010)},
    {"type": "Feature", "properties": {"name": "Scioto River"},
     "geometry": {"type": "LineString",
                  "coordinates": [[-83.02, 40.10], [-83.00, 39.96], [-82.98, 39.80]]}},
    {"type": "Feature", "properties": {"name": "Columbus Fountain"},
     "geometry": {"type": "Point", "coordinates": [-82.999, 39.959]}},
]


@pytest.fixture(scope="session")
def gazetteer_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("gaz") / "fixture.geojson"
    path.write_text(json.dumps({"type": "FeatureCollection", "features": FIXTURE_FEATURES}),
                    encoding="utf-8")
    return path


@pytest.fixture(scope="session")
def gaz(gazetteer_path) -> Gazetteer:
    return load(gazetteer_path)
