from __future__ import annotations

import json

import pytest
from fastapi.testclient import TestClient

from fuzzygeo.model import expression_to_json
from fuzzygeo.parser import parse
from fuzzygeo.service import create_app

from .oracles import brute_force_score


@pytest.fixture
def app(gaz, tmp_path):
    return create_app(gaz, store_dir=tmp_path / "store")


@pytest.fixture
def client(app):
    return TestClient(app)


# ── /geocode ─────────────────────────────────────────────

def test_geocode_between_returns_core_and_support(client):
    resp = client.post("/geocode", json={"expression": "between Walmart and Sam's Club"})
    assert resp.status_code == 200
    fc = resp.json()
    assert [f["id"] for f in fc["features"]] == ["core", "support"]
    assert fc["features"][0]["properties"] == {"mu": 1.0}
    assert fc["features"][1]["properties"] == {"mu_min": 0.0, "mu_max": 1.0}
    assert fc["meta"]["expression"]["constraints"][0]["kind"] == "between"


def test_geocode_intrinsic_frame_is_422(client):
    resp = client.post("/geocode", json={"expression": "in front of the palace"})
    assert resp.status_code == 422
    assert "intrinsic" in resp.json()["detail"]["error"]


def test_geocode_unknown_anchor_is_404_with_suggestions(client):
    resp = client.post("/geocode", json={"expression": "near Ohia"})
    assert resp.status_code == 404
    assert resp.json()["detail"]["suggestions"] == ["Ohio"]


def test_geocode_parse_failure_is_400_with_position(client):
    resp = client.post("/geocode", json={"expression": "6 hours"})
    assert resp.status_code == 400
    assert "position" in resp.json()["detail"]


def test_geocode_unknown_gazetteer_is_404(client):
    resp = client.post("/geocode", json={"expression": "in Ohio", "gazetteer_id": "nope"})
    assert resp.status_code == 404


def test_geocode_requires_exactly_one_input_form(client):
    assert client.post("/geocode", json={}).status_code == 400
    both = {"expression": "in Ohio",
            "expression_ast": {"subject": None, "constraints": []}}
    assert client.post("/geocode", json=both).status_code == 400


def test_geocode_accepts_ast_input(client, gaz):
    expr = parse("in Ohio", gaz.names())
    resp = client.post("/geocode", json={"expression_ast": expression_to_json(expr)})
    assert resp.status_code == 200
    via_text = client.post("/geocode", json={"expression": "in Ohio"})
    assert resp.content == via_text.content


def test_geocode_params_override_changes_output(client):
    a = client.post("/geocode", json={"expression": "6 hours south of Ohio"})
    b = client.post("/geocode", json={"expression": "6 hours south of Ohio",
                                      "params": {"speed_kmh.car": 50.0}})
    assert a.status_code == b.status_code == 200
    assert a.content != b.content
    assert client.post("/geocode", json={"expression": "in Ohio",
                                         "params": {"bogus": 1}}).status_code == 400


def test_geocode_warnings_surface_in_meta(client):
    resp = client.post("/geocode", json={"expression": "in Ohio near Asheville"})
    assert resp.status_code == 200
    assert any("empty intersection" in w for w in resp.json()["meta"]["warnings"])


# ── session lifecycle ────────────────────────────────────

FIXTURE_EXPRS = ["in Ohio", "near Asheville", "south of Ohio"]


def _create(client, judges=("a", "b"), exprs=FIXTURE_EXPRS):
    resp = client.post("/sessions", json={"expressions": list(exprs),
                                          "judges": list(judges)})
    assert resp.status_code == 201, resp.text
    return resp.json()


def test_create_session_task_count(client):
    info = _create(client)
    assert info["n_expressions"] == 3
    assert info["total_tasks"] == 6


def test_create_session_rejects_bad_expression(client):
    resp = client.post("/sessions", json={"expressions": ["6 hours"], "judges": ["a"]})
    assert resp.status_code == 400
    assert resp.json()["detail"]["expression_index"] == 0


def test_tasks_served_lowest_index_first_per_judge(client):
    sid = _create(client)["session_id"]
    t = client.get(f"/sessions/{sid}/tasks/next", params={"judge": "a"}).json()
    assert not t["done"]
    assert t["expression_id"] == 0
    assert t["expression"] == "in Ohio"
    assert t["progress"] == {"completed": 0, "total": 3}
    assert [f["id"] for f in t["region"]["features"]] == ["core", "support"]
    assert t["anchors"][0]["name"] == "Ohio"


def test_task_regions_frozen_at_creation(client, app):
    sid = _create(client)["session_id"]
    t1 = client.get(f"/sessions/{sid}/tasks/next", params={"judge": "a"}).json()
    # even swapping the gazetteer does not change served geometry
    app.state.gazetteers["default"] = None
    t2 = client.get(f"/sessions/{sid}/tasks/next", params={"judge": "b"}).json()
    assert t1["region"] == t2["region"]


def test_full_rating_flow_and_score(client):
    sid = _create(client)["session_id"]
    labels = {("a", 0): "strongly_agree", ("a", 1): "agree", ("a", 2): "neutral",
              ("b", 0): "disagree", ("b", 1): "strongly_agree", ("b", 2): "neutral"}
    for judge in ("a", "b"):
        while True:
            t = client.get(f"/sessions/{sid}/tasks/next", params={"judge": judge}).json()
            if t["done"]:
                break
            resp = client.post(f"/sessions/{sid}/ratings", json={
                "judge_id": judge, "expression_id": t["expression_id"],
                "label": labels[(judge, t["expression_id"])]})
            assert resp.status_code == 200, resp.text
    sigma = {"strongly_agree": 1.0, "agree": 0.5, "neutral": 0.0,
             "disagree": -0.5, "strongly_disagree": -1.0}
    expected = brute_force_score([[sigma[labels[(j, i)]] for j in ("a", "b")]
                                  for i in range(3)])
    score = client.get(f"/sessions/{sid}/score").json()
    assert score["complete"]
    assert score["score"] == pytest.approx(expected)
    done = client.get(f"/sessions/{sid}/tasks/next", params={"judge": "a"}).json()
    assert done["done"] and done["session_complete"]
    assert done["score"]["score"] == pytest.approx(expected)


def test_rating_completed_session_is_409(client):
    sid = _create(client, judges=("solo",), exprs=["in Ohio"])["session_id"]
    ok = client.post(f"/sessions/{sid}/ratings",
                     json={"judge_id": "solo", "expression_id": 0, "label": "agree"})
    assert ok.status_code == 200 and ok.json()["session_complete"]
    resp = client.post(f"/sessions/{sid}/ratings",
                       json={"judge_id": "solo", "expression_id": 0, "label": "neutral"})
    assert resp.status_code == 409


def test_unknown_session_judge_label(client):
    assert client.get("/sessions/nope/score").status_code == 404
    sid = _create(client)["session_id"]
    assert client.get(f"/sessions/{sid}/tasks/next",
                      params={"judge": "zz"}).status_code == 404
    assert client.post(f"/sessions/{sid}/ratings", json={
        "judge_id": "zz", "expression_id": 0, "label": "agree"}).status_code == 404
    assert client.post(f"/sessions/{sid}/ratings", json={
        "judge_id": "a", "expression_id": 0, "label": "meh"}).status_code == 400
    assert client.post(f"/sessions/{sid}/ratings", json={
        "judge_id": "a", "expression_id": 9, "label": "agree"}).status_code == 400


def test_partial_score_is_flagged(client):
    sid = _create(client)["session_id"]
    client.post(f"/sessions/{sid}/ratings",
                json={"judge_id": "a", "expression_id": 0, "label": "strongly_agree"})
    score = client.get(f"/sessions/{sid}/score").json()
    assert not score["complete"]
    assert score["rated"] == 1
    assert score["score"] == 1.0


def test_score_with_no_ratings(client):
    sid = _create(client)["session_id"]
    score = client.get(f"/sessions/{sid}/score").json()
    assert score == {"score": None, "n": 3, "m": 2,
                     "per_expression": [None, None, None],
                     "complete": False, "rated": 0}


def test_restart_replays_sessions(gaz, tmp_path):
    store = tmp_path / "store"
    client1 = TestClient(create_app(gaz, store_dir=store))
    sid = _create(client1, judges=("j",), exprs=["in Ohio", "near Asheville"])["session_id"]
    client1.post(f"/sessions/{sid}/ratings",
                 json={"judge_id": "j", "expression_id": 0, "label": "agree"})
    # a fresh process over the same store resumes mid-session
    client2 = TestClient(create_app(gaz, store_dir=store))
    t = client2.get(f"/sessions/{sid}/tasks/next", params={"judge": "j"}).json()
    assert t["expression_id"] == 1
    assert t["progress"] == {"completed": 1, "total": 2}


def test_ratings_csv_export(client):
    sid = _create(client, judges=("j",), exprs=["in Ohio"])["session_id"]
    client.post(f"/sessions/{sid}/ratings",
                json={"judge_id": "j", "expression_id": 0, "label": "agree"})
    resp = client.get(f"/sessions/{sid}/ratings.csv")
    assert resp.status_code == 200
    lines = resp.text.strip().splitlines()
    assert lines[0] == "session_id,expression_id,judge_id,label,sigma,timestamp"
    assert lines[1].startswith(f"{sid},0,j,agree,0.5,")


def test_ui_static_mount(gaz, tmp_path):
    ui = tmp_path / "ui"
    ui.mkdir()
    (ui / "index.html").write_text("<html><body>annotator</body></html>")
    client = TestClient(create_app(gaz, store_dir=tmp_path / "s", ui_dir=ui))
    resp = client.get("/ui/")
    assert resp.status_code == 200
    assert "annotator" in resp.text
