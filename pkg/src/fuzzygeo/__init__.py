"""fuzzygeo: qualitative spatial expressions -> fuzzy WGS84 regions."""

__version__ = "0.1.0"

from .geom import (  # noqa: F401
    BoundingBox,
    FuzzyRegion,
    GeoPoint,
    Region,
    geodesic_distance,
    intersect_fuzzy,
    membership,
    normalize_bbox,
)
