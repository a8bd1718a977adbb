"""Command-line front door.

    fuzzygeo geocode --gazetteer g.geojson --expr "6 hours south of Ohio"
    fuzzygeo gazetteer validate g.geojson
    fuzzygeo eval score --ratings ratings.csv
    fuzzygeo serve --port 8000 --gazetteer g.geojson --store ./store

Exit codes: 0 success, 1 validation error, 2 I/O error. The default gazetteer
path can come from the FUZZYGEO_GAZETTEER environment variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .errors import FuzzyGeoError
from .gazetteer import load
from .likert import read_ratings_csv, score_matrix
from .pipeline import geocode_to_feature_collection
from .semantics import SemanticParams, canonical_json

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2

GAZETTEER_ENV = "FUZZYGEO_GAZETTEER"


def _gazetteer_path(value: str | None) -> str:
    path = value or os.environ.get(GAZETTEER_ENV)
    if not path:
        raise FuzzyGeoError(
            f"no gazetteer given (use --gazetteer or set {GAZETTEER_ENV})")
    return path


def _parse_params(pairs: list[str] | None) -> SemanticParams:
    overrides = {}
    for pair in pairs or ():
        if "=" not in pair:
            raise FuzzyGeoError(f"--param expects key=value, got {pair!r}")
        key, value = pair.split("=", 1)
        overrides[key.strip()] = value.strip()
    return SemanticParams().with_overrides(overrides)


def cmd_geocode(args: argparse.Namespace) -> int:
    gaz = load(_gazetteer_path(args.gazetteer))
    params = _parse_params(args.param)
    ast = json.loads(args.ast) if args.ast else None
    fc = geocode_to_feature_collection(gaz, text=args.expr, ast=ast, params=params)
    payload = canonical_json(fc)
    if args.out:
        Path(args.out).write_bytes(payload.encode("utf-8"))
    else:
        sys.stdout.write(payload + "\n")
    for w in fc["meta"]["warnings"]:
        print(f"warning: {w}", file=sys.stderr)
    return EXIT_OK


def cmd_gazetteer_validate(args: argparse.Namespace) -> int:
    gaz = load(args.path)
    kinds: dict[str, int] = {}
    for e in gaz.entries:
        kinds[e.kind] = kinds.get(e.kind, 0) + 1
    summary = ", ".join(f"{v} {k}" for k, v in sorted(kinds.items())) or "empty"
    print(f"{args.path}: ok ({len(gaz)} entries: {summary})")
    return EXIT_OK


def cmd_eval_score(args: argparse.Namespace) -> int:
    matrix = read_ratings_csv(args.ratings)
    result = score_matrix(matrix)
    sys.stdout.write(canonical_json(result.to_json()) + "\n")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(load(_gazetteer_path(args.gazetteer)),
                     store_dir=args.store, ui_dir=args.ui_dir,
                     params=_parse_params(args.param))
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="fuzzygeo", description=__doc__,
                                  formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = top.add_subparsers(dest="command", required=True)

    g = sub.add_parser("geocode", help="geocode one expression to GeoJSON")
    g.add_argument("--gazetteer", help="GeoJSON gazetteer path")
    group = g.add_mutually_exclusive_group(required=True)
    group.add_argument("--expr", help="expression text")
    group.add_argument("--ast", help="expression AST as JSON")
    g.add_argument("--out", help="write GeoJSON here instead of stdout")
    g.add_argument("--param", action="append", metavar="K=V",
                   help="semantic parameter override (repeatable)")
    g.set_defaults(func=cmd_geocode)

    gz = sub.add_parser("gazetteer", help="gazetteer utilities")
    gzsub = gz.add_subparsers(dest="gazetteer_command", required=True)
    v = gzsub.add_parser("validate", help="load a gazetteer and report problems")
    v.add_argument("path")
    v.set_defaults(func=cmd_gazetteer_validate)

    ev = sub.add_parser("eval", help="evaluation utilities")
    evsub = ev.add_subparsers(dest="eval_command", required=True)
    s = evsub.add_parser("score", help="score a ratings CSV")
    s.add_argument("--ratings", required=True, help="CSV with expression_id,judge_id,label")
    s.set_defaults(func=cmd_eval_score)

    sv = sub.add_parser("serve", help="run the HTTP service")
    sv.add_argument("--host", default="127.0.0.1")
    sv.add_argument("--port", type=int, default=8000)
    sv.add_argument("--gazetteer")
    sv.add_argument("--store", help="directory for the rating event log")
    sv.add_argument("--ui-dir", help="serve the annotator UI bundle from here")
    sv.add_argument("--param", action="append", metavar="K=V")
    sv.set_defaults(func=cmd_serve)

    return top


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except FuzzyGeoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
