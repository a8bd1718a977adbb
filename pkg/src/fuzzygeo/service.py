"""HTTP front door: geocoding plus the annotation-session lifecycle.

The service is a thin adapter over the library: /geocode returns exactly the
bytes the CLI writes for the same input, and session state lives in the
rating event log, so a restarted process replays to the same state.
"""

from __future__ import annotations

import tempfile
import uuid
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .errors import (
    EvalError,
    ExpressionError,
    GazetteerError,
    ParseError,
    SemanticsError,
    SessionCompleteError,
    UnknownAnchorError,
    UnknownSessionError,
    UnsupportedFrameError,
)
from .gazetteer import Gazetteer, load
from .likert import LikertLabel, Rating, RatingLog, export_csv
from .parser import parse
from .pipeline import anchor_outlines, geocode_to_feature_collection
from .semantics import SemanticParams, canonical_json

GEOJSON_MEDIA_TYPE = "application/geo+json"


class GeocodeRequest(BaseModel):
    expression: str | None = None
    expression_ast: dict | None = None
    gazetteer_id: str = "default"
    params: dict | None = None


class SessionCreateRequest(BaseModel):
    expressions: list[str]
    judges: list[str]
    gazetteer_id: str = "default"
    params: dict | None = None
    session_id: str | None = None


class RatingRequest(BaseModel):
    judge_id: str
    expression_id: int
    label: str


def _as_http_error(exc: Exception) -> HTTPException:
    if isinstance(exc, UnsupportedFrameError):
        return HTTPException(422, {"error": str(exc)})
    if isinstance(exc, UnknownAnchorError):
        return HTTPException(404, {"error": str(exc), "suggestions": exc.suggestions})
    if isinstance(exc, ParseError):
        return HTTPException(400, {"error": str(exc), "position": exc.position})
    if isinstance(exc, (ExpressionError, SemanticsError, GazetteerError, ValueError)):
        return HTTPException(400, {"error": str(exc)})
    raise exc


def create_app(gazetteer: Gazetteer | str | Path,
               store_dir: str | Path | None = None,
               params: SemanticParams | None = None,
               ui_dir: str | Path | None = None) -> FastAPI:
    gaz = gazetteer if isinstance(gazetteer, Gazetteer) else load(gazetteer)
    base_params = params or SemanticParams()
    app = FastAPI(title="fuzzygeo", version="0.1.0")
    if store_dir:
        store = Path(store_dir)
    else:
        # ephemeral sessions: still log-backed, but gone with the process
        app.state.ephemeral_store = tempfile.TemporaryDirectory(prefix="fuzzygeo-")
        store = Path(app.state.ephemeral_store.name)
    log = RatingLog(store / "events.jsonl")
    app.state.gazetteers = {"default": gaz}
    app.state.rating_log = log
    app.state.params = base_params

    def _gaz(gazetteer_id: str) -> Gazetteer:
        g = app.state.gazetteers.get(gazetteer_id)
        if g is None:
            raise HTTPException(404, {"error": f"unknown gazetteer {gazetteer_id!r}"})
        return g

    def _params(overrides: dict | None) -> SemanticParams:
        if not overrides:
            return base_params
        try:
            return base_params.with_overrides(overrides)
        except Exception as exc:
            raise _as_http_error(exc)

    @app.post("/geocode")
    def geocode_endpoint(req: GeocodeRequest) -> Response:
        if (req.expression is None) == (req.expression_ast is None):
            raise HTTPException(400, {"error": "exactly one of expression/expression_ast"})
        g = _gaz(req.gazetteer_id)
        try:
            fc = geocode_to_feature_collection(
                g, text=req.expression, ast=req.expression_ast, params=_params(req.params))
        except HTTPException:
            raise
        except Exception as exc:
            raise _as_http_error(exc)
        return Response(content=canonical_json(fc), media_type=GEOJSON_MEDIA_TYPE)

    @app.post("/sessions", status_code=201)
    def create_session(req: SessionCreateRequest) -> dict:
        g = _gaz(req.gazetteer_id)
        p = _params(req.params)
        tasks = []
        for i, text in enumerate(req.expressions):
            try:
                fc = geocode_to_feature_collection(g, text=text, params=p)
                expr = parse(text, g.names())
                outlines = anchor_outlines(expr, g)
            except Exception as exc:
                err = _as_http_error(exc)
                detail = dict(err.detail) if isinstance(err.detail, dict) else {"error": str(err.detail)}
                detail["expression_index"] = i
                raise HTTPException(err.status_code, detail)
            tasks.append({"text": text, "region": fc, "anchors": outlines})
        session_id = req.session_id or uuid.uuid4().hex[:12]
        try:
            st = log.create_session(session_id, len(tasks), req.judges,
                                    meta={"expressions": tasks})
        except EvalError as exc:
            raise HTTPException(400, {"error": str(exc)})
        return {"session_id": st.session_id, "n_expressions": st.n_expressions,
                "judges": list(st.judges), "total_tasks": st.total_tasks}

    def _session(session_id: str):
        try:
            return log.session(session_id)
        except UnknownSessionError as exc:
            raise HTTPException(404, {"error": str(exc)})

    def _score_json(st) -> dict | None:
        if not st.ratings:
            return None
        return log.score(st.session_id).to_json()

    @app.get("/sessions/{session_id}")
    def session_info(session_id: str) -> dict:
        st = _session(session_id)
        return {"session_id": st.session_id, "n_expressions": st.n_expressions,
                "judges": list(st.judges), "total_tasks": st.total_tasks,
                "rated": len(st.ratings), "complete": st.complete}

    @app.get("/sessions/{session_id}/tasks/next")
    def next_task(session_id: str, judge: str = Query(...)) -> dict:
        st = _session(session_id)
        if judge not in st.judges:
            raise HTTPException(404, {"error": f"unknown judge {judge!r}"})
        i = st.next_task(judge)
        if i is None:
            out = {"done": True, "session_complete": st.complete}
            score = _score_json(st)
            if st.complete and score:
                out["score"] = score
            return out
        task = st.meta["expressions"][i]
        return {
            "done": False,
            "expression_id": i,
            "expression": task["text"],
            "region": task["region"],
            "anchors": task["anchors"],
            "progress": {"completed": st.judge_progress(judge),
                         "total": st.n_expressions},
        }

    @app.post("/sessions/{session_id}/ratings")
    def post_rating(session_id: str, req: RatingRequest) -> dict:
        st = _session(session_id)
        if req.judge_id not in st.judges:
            raise HTTPException(404, {"error": f"unknown judge {req.judge_id!r}"})
        try:
            label = LikertLabel(req.label)
        except ValueError:
            raise HTTPException(400, {"error": f"unknown label {req.label!r}"})
        try:
            ack = log.record(Rating(session_id, req.expression_id, req.judge_id, label))
        except SessionCompleteError as exc:
            raise HTTPException(409, {"error": str(exc)})
        except EvalError as exc:
            raise HTTPException(400, {"error": str(exc)})
        st = _session(session_id)
        ack["session_complete"] = st.complete
        return ack

    @app.get("/sessions/{session_id}/score")
    def session_score(session_id: str) -> dict:
        st = _session(session_id)
        score = _score_json(st)
        if score is None:
            return {"score": None, "n": st.n_expressions, "m": len(st.judges),
                    "per_expression": [None] * st.n_expressions,
                    "complete": False, "rated": 0}
        return score

    @app.get("/sessions/{session_id}/ratings.csv")
    def ratings_csv(session_id: str) -> Response:
        _session(session_id)
        return Response(content=export_csv(log, session_id), media_type="text/csv")

    if ui_dir:
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
