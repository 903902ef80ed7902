"""HTTP front end for scene authoring.

Thin JSON layer over SceneStore. Every error leaves as
{"code": ..., "message": ..., "violations": [...]} so clients can branch
on the code without parsing prose; validation problems carry one
violation entry per broken rule.
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi import FastAPI, File, Form, Request, Response, UploadFile
from fastapi.responses import JSONResponse

from .dataset import DatasetError
from .events import DEFAULT_JUMP_THRESHOLD, detect_events, suggest_foreshadow
from .foreshadow import active_intervals
from .scene import (
    FrameOutOfRange,
    RevisionConflict,
    SceneFormatError,
    SceneStore,
    UnknownScene,
    UnknownSpec,
    ValidationFailed,
    scene_to_json,
    spec_from_json,
    spec_to_json,
)

__all__ = ["create_app"]


class BadRequest(Exception):
    code = "BadRequest"


def _error_body(code: str, message: str, violations: list | None = None) -> dict:
    return {
        "code": code,
        "message": message,
        "violations": [
            {"code": v.code, "message": v.message, "spec_id": v.spec_id}
            for v in (violations or [])
        ],
    }


def _field(body: dict, name: str, kind: type, required: bool = True, default=None):
    if name not in body:
        if required:
            raise BadRequest(f"missing field: {name!r}")
        return default
    value = body[name]
    try:
        if kind is int and isinstance(value, bool):
            raise TypeError("bool is not an int here")
        return kind(value)
    except (TypeError, ValueError) as exc:
        raise BadRequest(f"field {name!r} is not a valid {kind.__name__}: {exc}") from exc


async def _json_body(request: Request) -> dict:
    try:
        body = json.loads(await request.body() or b"{}")
    except json.JSONDecodeError as exc:
        raise BadRequest(f"request body is not JSON: {exc}") from exc
    if not isinstance(body, dict):
        raise BadRequest("request body must be a JSON object")
    return body


def create_app(store: SceneStore) -> FastAPI:
    app = FastAPI(title="prefigure", docs_url=None, redoc_url=None)

    @app.exception_handler(UnknownScene)
    async def _unknown_scene(_, exc: UnknownScene):
        return JSONResponse(status_code=404, content=_error_body(exc.code, f"no such scene: {exc}"))

    @app.exception_handler(UnknownSpec)
    async def _unknown_spec(_, exc: UnknownSpec):
        return JSONResponse(status_code=404, content=_error_body(exc.code, f"no such spec: {exc}"))

    @app.exception_handler(FrameOutOfRange)
    async def _frame_range(_, exc: FrameOutOfRange):
        return JSONResponse(status_code=404, content=_error_body(exc.code, str(exc)))

    @app.exception_handler(RevisionConflict)
    async def _conflict(_, exc: RevisionConflict):
        return JSONResponse(status_code=409, content=_error_body(exc.code, str(exc)))

    @app.exception_handler(ValidationFailed)
    async def _invalid(_, exc: ValidationFailed):
        return JSONResponse(
            status_code=422, content=_error_body(exc.code, str(exc), exc.violations)
        )

    @app.exception_handler(DatasetError)
    async def _bad_data(_, exc: DatasetError):
        return JSONResponse(status_code=400, content=_error_body(exc.code, str(exc)))

    @app.exception_handler(SceneFormatError)
    async def _bad_doc(_, exc: SceneFormatError):
        return JSONResponse(status_code=400, content=_error_body(exc.code, str(exc)))

    @app.exception_handler(BadRequest)
    async def _bad_request(_, exc: BadRequest):
        return JSONResponse(status_code=400, content=_error_body(exc.code, str(exc)))

    def _scene_view(scene) -> dict:
        timeline = store.timeline_for(scene)
        doc = scene_to_json(scene)
        doc["derived"] = {
            "frame_count": timeline.frame_count,
            "duration_s": timeline.duration_s,
            "period_boundaries": list(timeline.period_boundaries),
            "foreshadow_intervals": [
                {
                    "spec_id": iv.spec_id,
                    "start_s": iv.start_s,
                    "end_s": iv.end_s,
                    "target_period_s": iv.target_period_s,
                }
                for iv in active_intervals(scene.specs, scene.settings)
            ],
        }
        return doc

    @app.post("/scenes", status_code=201)
    async def create_scene(
        file: UploadFile = File(...),
        scene_id: str | None = Form(default=None),
        title: str = Form(default=""),
    ):
        raw = (await file.read()).decode("utf-8-sig")
        scene = store.create_scene(raw, scene_id=scene_id, title=title)
        return _scene_view(scene)

    @app.get("/scenes")
    async def list_scenes():
        return {"scenes": store.list_scenes()}

    @app.get("/scenes/{scene_id}")
    async def get_scene(scene_id: str):
        return _scene_view(store.get_scene(scene_id))

    @app.patch("/scenes/{scene_id}/settings")
    async def patch_settings(scene_id: str, request: Request):
        body = await _json_body(request)
        revision = _field(body, "revision", int)
        settings_patch = body.get("settings") or {}
        canvas_patch = body.get("canvas") or {}
        if not isinstance(settings_patch, dict) or not isinstance(canvas_patch, dict):
            raise BadRequest("'settings' and 'canvas' must be objects")
        scene = store.update_settings(
            scene_id, revision, settings_patch=settings_patch, canvas_patch=canvas_patch
        )
        return _scene_view(scene)

    @app.patch("/scenes/{scene_id}/data")
    async def patch_data(scene_id: str, request: Request):
        body = await _json_body(request)
        scene = store.edit_data_cell(
            scene_id,
            _field(body, "revision", int),
            _field(body, "item", str),
            _field(body, "period", str),
            _field(body, "value", float),
        )
        return _scene_view(scene)

    @app.post("/scenes/{scene_id}/specs", status_code=201)
    async def add_spec(scene_id: str, request: Request):
        body = await _json_body(request)
        revision = _field(body, "revision", int)
        spec_doc = body.get("spec")
        if not isinstance(spec_doc, dict):
            raise BadRequest("missing field: 'spec'")
        scene = store.add_spec(scene_id, revision, spec_from_json(spec_doc))
        return _scene_view(scene)

    @app.put("/scenes/{scene_id}/specs/{spec_id}")
    async def update_spec(scene_id: str, spec_id: str, request: Request):
        body = await _json_body(request)
        revision = _field(body, "revision", int)
        spec_doc = body.get("spec")
        if not isinstance(spec_doc, dict):
            raise BadRequest("missing field: 'spec'")
        scene = store.update_spec(scene_id, revision, spec_id, spec_from_json(spec_doc))
        return _scene_view(scene)

    @app.delete("/scenes/{scene_id}/specs/{spec_id}")
    async def delete_spec(scene_id: str, spec_id: str, revision: int):
        return _scene_view(store.delete_spec(scene_id, revision, spec_id))

    @app.get("/scenes/{scene_id}/frames/{frame_index}")
    async def get_frame(scene_id: str, frame_index: int):
        svg = store.preview(scene_id, frame_index)
        return Response(content=svg, media_type="image/svg+xml")

    @app.get("/scenes/{scene_id}/events")
    async def get_events(
        scene_id: str, top_n: int | None = None, jump: int = DEFAULT_JUMP_THRESHOLD
    ):
        scene = store.get_scene(scene_id)
        effective_top_n = top_n if top_n is not None else scene.settings.top_n
        events = detect_events(scene.dataset, top_n=effective_top_n, jump_threshold=jump)
        return {
            "events": [
                {
                    "kind": e.kind,
                    "item_id": e.item_id,
                    "period_index": e.period_index,
                    "magnitude": e.magnitude,
                    "suggestion": spec_to_json(suggest_foreshadow(e)),
                }
                for e in events
            ]
        }

    @app.post("/scenes/{scene_id}/export")
    async def export_scene(scene_id: str, request: Request):
        body = await _json_body(request)
        out_dir = body.get("out_dir")
        manifest, path = store.export(scene_id, Path(out_dir) if out_dir else None)
        return {"out_dir": str(path), "manifest": manifest}

    return app
