"""Scene persistence and the HTTP authoring service."""

from __future__ import annotations

import json
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from prefigure import DeEmphasis, ForeshadowSpec, PreScene, Prologue
from prefigure.scene import (
    RevisionConflict,
    Scene,
    SceneStore,
    UnknownScene,
    UnknownSpec,
    ValidationFailed,
    scene_bytes,
    scene_from_json,
    spec_from_json,
    spec_to_json,
)
from prefigure.service import create_app

from conftest import SAMPLE_CSV

SPEC_DOC = {
    "id": "s1",
    "effects": [{"kind": "de_emphasis"}],
    "target_items": ["delta"],
    "timing": 0.5,
    "duration": 1.0,
    "target_period": 2.0,
}


@pytest.fixture
def store(tmp_path) -> SceneStore:
    return SceneStore(tmp_path / "store")


@pytest.fixture
def scene(store) -> Scene:
    return store.create_scene(SAMPLE_CSV, scene_id="demo")


@pytest.fixture
def client(store) -> TestClient:
    return TestClient(create_app(store), raise_server_exceptions=False)


def make_scene(client, scene_id="demo") -> dict:
    r = client.post(
        "/scenes",
        files={"file": ("d.csv", SAMPLE_CSV.encode(), "text/csv")},
        data={"scene_id": scene_id},
    )
    assert r.status_code == 201
    return r.json()


# --- store ------------------------------------------------------------------


def test_create_scene_defaults(scene):
    assert scene.revision == 1
    assert scene.specs == ()
    assert scene.settings.fps == 30
    assert scene.dataset.item_ids[0] == "alpha"
    assert "tech" in scene.canvas.category_palette


def test_scene_file_round_trips_bytes(store, scene):
    path = store.scenes_dir / "demo.json"
    raw = path.read_bytes()
    assert scene_bytes(scene_from_json(json.loads(raw))) == raw


def test_store_survives_restart(store, scene, tmp_path):
    store.add_spec("demo", 1, spec_from_json(SPEC_DOC))
    reopened = SceneStore(store.root)
    loaded = reopened.get_scene("demo")
    assert loaded.revision == 2
    assert loaded.specs[0].id == "s1"
    assert loaded.dataset == scene.dataset


def test_mutations_bump_revision(store, scene):
    s2 = store.add_spec("demo", 1, spec_from_json(SPEC_DOC))
    assert s2.revision == 2
    s3 = store.update_settings("demo", 2, settings_patch={"fps": 10})
    assert s3.revision == 3
    assert s3.settings.fps == 10
    assert s3.specs == s2.specs


def test_stale_revision_conflicts(store, scene):
    store.add_spec("demo", 1, spec_from_json(SPEC_DOC))
    with pytest.raises(RevisionConflict) as e:
        store.update_settings("demo", 1, settings_patch={"fps": 10})
    assert e.value.expected == 1
    assert e.value.actual == 2


def test_concurrent_writes_same_base_revision(store, scene):
    import threading

    barrier = threading.Barrier(2)
    outcomes: list[str] = []
    lock = threading.Lock()

    def attempt(tag: str) -> None:
        barrier.wait()
        try:
            store.add_spec("demo", 1, spec_from_json(dict(SPEC_DOC, id=tag)))
            result = "ok"
        except RevisionConflict:
            result = "conflict"
        with lock:
            outcomes.append(result)

    threads = [threading.Thread(target=attempt, args=(t,)) for t in ("a", "b")]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert sorted(outcomes) == ["conflict", "ok"]
    assert store.get_scene("demo").revision == 2
    assert len(store.get_scene("demo").specs) == 1


def test_invalid_spec_never_persists(store, scene):
    bad = spec_from_json(dict(SPEC_DOC, timing=1.5))  # 1.5 + 1.0 > 2.0
    with pytest.raises(ValidationFailed) as e:
        store.add_spec("demo", 1, bad)
    assert [v.code for v in e.value.violations] == ["EndsAfterEvent"]
    assert store.get_scene("demo").revision == 1
    assert store.get_scene("demo").specs == ()
    on_disk = json.loads((store.scenes_dir / "demo.json").read_text())
    assert on_disk["specs"] == []


def test_duplicate_spec_id_rejected(store, scene):
    store.add_spec("demo", 1, spec_from_json(SPEC_DOC))
    with pytest.raises(ValidationFailed) as e:
        store.add_spec("demo", 2, spec_from_json(SPEC_DOC))
    assert "DuplicateSpecId" in [v.code for v in e.value.violations]


def test_update_and_delete_spec(store, scene):
    store.add_spec("demo", 1, spec_from_json(SPEC_DOC))
    updated = store.update_spec("demo", 2, "s1", spec_from_json(dict(SPEC_DOC, timing=0.25)))
    assert updated.specs[0].timing == 0.25
    with pytest.raises(UnknownSpec):
        store.update_spec("demo", 3, "nope", spec_from_json(SPEC_DOC))
    final = store.delete_spec("demo", 3, "s1")
    assert final.specs == ()


def test_edit_cell_keeps_rest(store, scene):
    edited = store.edit_data_cell("demo", 1, "echo", "2020", 44.0)
    assert edited.dataset.value("echo", "2020") == 44.0
    assert edited.dataset.value("echo", "2019") == 20.0
    assert edited.revision == 2


def test_unknown_scene(store):
    with pytest.raises(UnknownScene):
        store.get_scene("missing")


def test_settings_patch_validation(store, scene):
    with pytest.raises(ValidationFailed) as e:
        store.update_settings("demo", 1, settings_patch={"fps": 0})
    assert "InvalidSettings" in [v.code for v in e.value.violations]
    assert store.get_scene("demo").settings.fps == 30


def test_preview_matches_export_bytes(store, scene, tmp_path):
    store.update_settings("demo", 1, settings_patch={"fps": 5, "seconds_per_period": 1.0})
    out = tmp_path / "exp"
    _, path = store.export("demo", out)
    assert path == out
    for n in (0, 4, 10):
        on_disk = (out / f"frame_{n:05d}.svg").read_bytes()
        assert store.preview("demo", n) == on_disk


# --- HTTP API ---------------------------------------------------------------


def test_create_and_get(client):
    doc = make_scene(client)
    assert doc["revision"] == 1
    assert doc["dataset"]["periods"] == ["2018", "2019", "2020"]
    assert doc["derived"]["frame_count"] == 121
    got = client.get("/scenes/demo").json()
    assert got == doc
    listing = client.get("/scenes").json()
    assert listing == {"scenes": ["demo"]}


def test_create_rejects_bad_csv(client):
    r = client.post("/scenes", files={"file": ("d.csv", b"item,category,p0\na,c,1\n")})
    assert r.status_code == 400
    assert r.json()["code"] == "TooFewPeriods"
    assert r.json()["violations"] == []


def test_missing_scene_404(client):
    r = client.get("/scenes/missing")
    assert r.status_code == 404
    assert r.json()["code"] == "UnknownScene"


def test_patch_settings_and_conflict(client):
    make_scene(client)
    r = client.patch(
        "/scenes/demo/settings",
        json={"revision": 1, "settings": {"fps": 10, "seconds_per_period": 1.0}},
    )
    assert r.status_code == 200
    assert r.json()["settings"]["fps"] == 10
    assert r.json()["derived"]["frame_count"] == 21

    stale = client.patch("/scenes/demo/settings", json={"revision": 1, "settings": {"fps": 5}})
    assert stale.status_code == 409
    assert stale.json()["code"] == "RevisionConflict"


def test_patch_settings_requires_revision(client):
    make_scene(client)
    r = client.patch("/scenes/demo/settings", json={"settings": {"fps": 10}})
    assert r.status_code == 400
    assert r.json()["code"] == "BadRequest"


def test_spec_crud_over_http(client):
    make_scene(client)
    r = client.post("/scenes/demo/specs", json={"revision": 1, "spec": SPEC_DOC})
    assert r.status_code == 201
    assert [s["id"] for s in r.json()["specs"]] == ["s1"]
    assert r.json()["derived"]["foreshadow_intervals"][0]["spec_id"] == "s1"

    r = client.put(
        "/scenes/demo/specs/s1",
        json={"revision": 2, "spec": dict(SPEC_DOC, timing=0.25)},
    )
    assert r.status_code == 200
    assert r.json()["specs"][0]["timing"] == 0.25

    r = client.delete("/scenes/demo/specs/s1", params={"revision": 3})
    assert r.status_code == 200
    assert r.json()["specs"] == []

    r = client.delete("/scenes/demo/specs/s1", params={"revision": 4})
    assert r.status_code == 404
    assert r.json()["code"] == "UnknownSpec"


def test_invalid_spec_rejected_with_violations(client):
    make_scene(client)
    bad = dict(SPEC_DOC, timing=1.5, duration=1.0)
    r = client.post("/scenes/demo/specs", json={"revision": 1, "spec": bad})
    assert r.status_code == 422
    body = r.json()
    assert body["code"] == "ValidationFailed"
    assert [v["code"] for v in body["violations"]] == ["EndsAfterEvent"]
    assert body["violations"][0]["spec_id"] == "s1"
    # scene untouched
    assert client.get("/scenes/demo").json()["specs"] == []


def test_malformed_spec_document(client):
    make_scene(client)
    r = client.post(
        "/scenes/demo/specs",
        json={"revision": 1, "spec": {"id": "x", "effects": [{"kind": "sparkle"}],
                                      "target_items": [], "timing": 0, "duration": 1,
                                      "target_period": 2}},
    )
    assert r.status_code == 400
    assert r.json()["code"] == "SceneFormat"


def test_frame_endpoint_bytes(client, store):
    make_scene(client)
    client.patch(
        "/scenes/demo/settings",
        json={"revision": 1, "settings": {"fps": 5, "seconds_per_period": 1.0}},
    )
    r = client.get("/scenes/demo/frames/3")
    assert r.status_code == 200
    assert r.headers["content-type"].startswith("image/svg+xml")
    assert r.content == store.preview("demo", 3)
    oob = client.get("/scenes/demo/frames/999")
    assert oob.status_code == 404
    assert oob.json()["code"] == "FrameOutOfRange"


def test_data_edit_endpoint(client):
    make_scene(client)
    r = client.patch(
        "/scenes/demo/data",
        json={"revision": 1, "item": "echo", "period": "2020", "value": 44.0},
    )
    assert r.status_code == 200
    assert r.json()["dataset"]["values"][4] == [33.0, 20.0, 44.0]
    bad = client.patch(
        "/scenes/demo/data",
        json={"revision": 2, "item": "nope", "period": "2020", "value": 1.0},
    )
    assert bad.status_code == 400
    assert bad.json()["code"] == "UnknownItem"


def test_events_endpoint(client):
    make_scene(client)
    r = client.get("/scenes/demo/events", params={"top_n": 3, "jump": 2})
    assert r.status_code == 200
    events = r.json()["events"]
    assert events == sorted(
        events, key=lambda e: (e["period_index"], e["kind"], e["item_id"])
    )
    assert all(
        e["suggestion"]["target_period"] == e["period_index"] for e in events
    )
    kinds = {(e["kind"], e["item_id"]) for e in events}
    assert ("new_leader", "delta") in kinds


def test_export_endpoint_writes_tree(client, store):
    make_scene(client)
    client.patch(
        "/scenes/demo/settings",
        json={"revision": 1, "settings": {"fps": 5, "seconds_per_period": 1.0}},
    )
    r = client.post("/scenes/demo/export", json={})
    assert r.status_code == 200
    out = Path(r.json()["out_dir"])
    assert out == store.exports_dir / "demo"
    assert (out / "animation.json").exists()
    assert r.json()["manifest"]["frame_count"] == 11
    assert len(list(out.glob("frame_*.svg"))) == 11


def test_scene_view_matches_persisted_doc(client, store):
    make_scene(client)
    client.post("/scenes/demo/specs", json={"revision": 1, "spec": SPEC_DOC})
    view = client.get("/scenes/demo").json()
    view.pop("derived")
    on_disk = json.loads((store.scenes_dir / "demo.json").read_text())
    assert view == on_disk


def test_spec_json_round_trip():
    spec = ForeshadowSpec(
        id="s9",
        effects=(Prologue(text="x"), PreScene(), DeEmphasis(0.4)),
        target_items=("a", "b"),
        timing=0.25,
        duration=0.5,
        target_period=1.0,
    )
    assert spec_from_json(spec_to_json(spec)) == spec
