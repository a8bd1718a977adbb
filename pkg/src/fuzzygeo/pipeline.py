"""Shared geocoding pipeline used by both the CLI and the HTTP service, so the
two front doors emit byte-identical GeoJSON for identical inputs."""

from __future__ import annotations

from .gazetteer import Gazetteer
from .model import SpatialExpression, expression_from_json
from .parser import parse
from .semantics import (
    SemanticParams,
    fuzzy_region_to_feature_collection,
    geocode,
)


def geocode_to_feature_collection(gaz: Gazetteer, text: str | None = None,
                                  ast: dict | None = None,
                                  params: SemanticParams | None = None) -> dict:
    """Parse (or deserialize) one expression, geocode it, and wrap the result
    as the documented core/support FeatureCollection with a meta echo."""
    if (text is None) == (ast is None):
        raise ValueError("exactly one of text/ast must be given")
    params = params or SemanticParams()
    warnings: list[str] = []
    if text is not None:
        expr = parse(text, gaz.names(), warnings)
    else:
        expr = expression_from_json(ast)
    fr = geocode(expr, gaz, params, warnings)
    return fuzzy_region_to_feature_collection(fr, expr, params, warnings)


def anchor_outlines(expr: SpatialExpression, gaz: Gazetteer) -> list[dict]:
    """Anchor geometries referenced by an expression, for map display."""
    seen = []
    names = [a.name for c in expr.constraints for a in c.anchors]
    if expr.subject is not None:
        names.append(expr.subject.name)
    out = []
    for name in names:
        anchor = gaz.resolve(name)
        if anchor.name in seen:
            continue
        seen.append(anchor.name)
        out.append({"name": anchor.name, "kind": anchor.kind,
                    "geometry": anchor.geometry_geojson()})
    return out
