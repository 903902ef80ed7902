"""Scene documents: dataset + settings + canvas + foreshadow specs.

A scene is persisted as one self-contained JSON file per scene id.
Serialization is canonical (sorted keys, fixed indent, trailing newline)
so save -> load -> save is byte-identical. Mutations use optimistic
concurrency: callers send the revision they based their edit on and get
a RevisionConflict if the scene moved underneath them.
"""

from __future__ import annotations

import json
import os
import threading
import uuid
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Sequence

from .dataset import RankingDataset, ItemRecord, edit_cell, parse_dataset
from .foreshadow import (
    Contour,
    DeEmphasis,
    EffectKind,
    ForeshadowSpec,
    PreScene,
    Prologue,
    SpecViolation,
    validate_spec,
)
from .render import CanvasSpec, default_canvas, export_animation
from .timeline import AnimationSettings, KeyframeTimeline, compile_timeline

__all__ = [
    "FrameOutOfRange",
    "RevisionConflict",
    "Scene",
    "SceneFormatError",
    "SceneStore",
    "UnknownScene",
    "UnknownSpec",
    "ValidationFailed",
    "scene_from_json",
    "scene_to_json",
]


class SceneError(Exception):
    code = "SceneError"


class UnknownScene(SceneError):
    code = "UnknownScene"


class UnknownSpec(SceneError):
    code = "UnknownSpec"


class RevisionConflict(SceneError):
    code = "RevisionConflict"

    def __init__(self, expected: int, actual: int):
        self.expected = expected
        self.actual = actual
        super().__init__(f"scene is at revision {actual}, request was based on {expected}")


class ValidationFailed(SceneError):
    code = "ValidationFailed"

    def __init__(self, violations: Sequence[SpecViolation]):
        self.violations = list(violations)
        super().__init__("; ".join(f"{v.code}: {v.message}" for v in self.violations))


class FrameOutOfRange(SceneError):
    code = "FrameOutOfRange"


class SceneFormatError(SceneError):
    code = "SceneFormat"


@dataclass(frozen=True)
class Scene:
    """Everything needed to compile, style, and render one animation."""

    id: str
    dataset: RankingDataset
    settings: AnimationSettings
    canvas: CanvasSpec
    specs: tuple[ForeshadowSpec, ...]
    revision: int

    def spec_by_id(self, spec_id: str) -> ForeshadowSpec:
        for spec in self.specs:
            if spec.id == spec_id:
                return spec
        raise UnknownSpec(spec_id)


# --- JSON codec -----------------------------------------------------------

_EFFECT_KINDS = {"prologue": Prologue, "pre_scene": PreScene, "contour": Contour,
                 "de_emphasis": DeEmphasis}


def effect_to_json(effect: EffectKind) -> dict:
    if isinstance(effect, Prologue):
        return {"kind": "prologue", "text": effect.text}
    if isinstance(effect, PreScene):
        return {"kind": "pre_scene"}
    if isinstance(effect, Contour):
        return {"kind": "contour", "stroke_width": effect.stroke_width,
                "color": list(effect.color)}
    if isinstance(effect, DeEmphasis):
        return {"kind": "de_emphasis", "off_target_opacity": effect.off_target_opacity}
    raise TypeError(f"not an effect: {effect!r}")


def effect_from_json(doc: dict) -> EffectKind:
    try:
        kind = doc["kind"]
        if kind == "prologue":
            return Prologue(text=str(doc["text"]))
        if kind == "pre_scene":
            return PreScene()
        if kind == "contour":
            color = doc.get("color", list(Contour().color))
            return Contour(
                stroke_width=float(doc.get("stroke_width", Contour().stroke_width)),
                color=(int(color[0]), int(color[1]), int(color[2])),
            )
        if kind == "de_emphasis":
            return DeEmphasis(
                off_target_opacity=float(
                    doc.get("off_target_opacity", DeEmphasis().off_target_opacity)
                )
            )
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise SceneFormatError(f"malformed effect: {doc!r} ({exc})") from exc
    raise SceneFormatError(f"unknown effect kind: {doc.get('kind')!r}")


def spec_to_json(spec: ForeshadowSpec) -> dict:
    return {
        "id": spec.id,
        "effects": [effect_to_json(e) for e in spec.effects],
        "target_items": list(spec.target_items),
        "timing": spec.timing,
        "duration": spec.duration,
        "target_period": spec.target_period,
    }


def spec_from_json(doc: dict) -> ForeshadowSpec:
    try:
        return ForeshadowSpec(
            id=str(doc["id"]),
            effects=tuple(effect_from_json(e) for e in doc["effects"]),
            target_items=tuple(str(t) for t in doc["target_items"]),
            timing=float(doc["timing"]),
            duration=float(doc["duration"]),
            target_period=float(doc["target_period"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SceneFormatError(f"malformed foreshadow spec: {exc}") from exc


def dataset_to_json(dataset: RankingDataset) -> dict:
    return {
        "periods": list(dataset.periods),
        "items": [{"id": i.id, "category": i.category} for i in dataset.items],
        "values": [list(row) for row in dataset.values],
    }


def dataset_from_json(doc: dict) -> RankingDataset:
    try:
        return RankingDataset(
            items=tuple(
                ItemRecord(id=str(i["id"]), category=str(i["category"])) for i in doc["items"]
            ),
            periods=tuple(str(p) for p in doc["periods"]),
            values=tuple(tuple(float(v) for v in row) for row in doc["values"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SceneFormatError(f"malformed dataset: {exc}") from exc


def settings_to_json(settings: AnimationSettings) -> dict:
    return {
        "seconds_per_period": settings.seconds_per_period,
        "fps": settings.fps,
        "top_n": settings.top_n,
        "easing": settings.easing,
    }


def settings_from_json(doc: dict) -> AnimationSettings:
    base = AnimationSettings()
    try:
        return AnimationSettings(
            seconds_per_period=float(doc.get("seconds_per_period", base.seconds_per_period)),
            fps=int(doc.get("fps", base.fps)),
            top_n=int(doc.get("top_n", base.top_n)),
            easing=doc.get("easing", base.easing),
        )
    except (TypeError, ValueError) as exc:
        raise SceneFormatError(f"invalid settings: {exc}") from exc


def canvas_to_json(canvas: CanvasSpec) -> dict:
    return {
        "width": canvas.width,
        "height": canvas.height,
        "margin_top": canvas.margin_top,
        "margin_right": canvas.margin_right,
        "margin_bottom": canvas.margin_bottom,
        "margin_left": canvas.margin_left,
        "bar_height_fraction": canvas.bar_height_fraction,
        "title": canvas.title,
        "category_palette": {k: list(v) for k, v in canvas.category_palette.items()},
    }


def canvas_from_json(doc: dict) -> CanvasSpec:
    base = CanvasSpec()
    try:
        palette = {
            str(k): (int(v[0]), int(v[1]), int(v[2]))
            for k, v in doc.get("category_palette", {}).items()
        }
        return CanvasSpec(
            width=int(doc.get("width", base.width)),
            height=int(doc.get("height", base.height)),
            margin_top=float(doc.get("margin_top", base.margin_top)),
            margin_right=float(doc.get("margin_right", base.margin_right)),
            margin_bottom=float(doc.get("margin_bottom", base.margin_bottom)),
            margin_left=float(doc.get("margin_left", base.margin_left)),
            bar_height_fraction=float(
                doc.get("bar_height_fraction", base.bar_height_fraction)
            ),
            title=str(doc.get("title", "")),
            category_palette=palette,
        )
    except (TypeError, ValueError, IndexError) as exc:
        raise SceneFormatError(f"invalid canvas: {exc}") from exc


def scene_to_json(scene: Scene) -> dict:
    return {
        "id": scene.id,
        "revision": scene.revision,
        "dataset": dataset_to_json(scene.dataset),
        "settings": settings_to_json(scene.settings),
        "canvas": canvas_to_json(scene.canvas),
        "specs": [spec_to_json(s) for s in scene.specs],
    }


def scene_from_json(doc: dict) -> Scene:
    try:
        scene_id = str(doc["id"])
        revision = int(doc["revision"])
    except (KeyError, TypeError, ValueError) as exc:
        raise SceneFormatError(f"malformed scene document: {exc}") from exc
    return Scene(
        id=scene_id,
        dataset=dataset_from_json(doc.get("dataset", {})),
        settings=settings_from_json(doc.get("settings", {})),
        canvas=canvas_from_json(doc.get("canvas", {})),
        specs=tuple(spec_from_json(s) for s in doc.get("specs", [])),
        revision=revision,
    )


def scene_bytes(scene: Scene) -> bytes:
    return (json.dumps(scene_to_json(scene), indent=2, sort_keys=True) + "\n").encode("utf-8")


# --- store ----------------------------------------------------------------


def _validate_scene_specs(scene: Scene) -> None:
    violations: list[SpecViolation] = []
    seen: set[str] = set()
    for spec in scene.specs:
        if spec.id in seen:
            violations.append(
                SpecViolation("DuplicateSpecId", f"spec id used twice: {spec.id!r}", spec.id)
            )
        seen.add(spec.id)
        violations.extend(validate_spec(spec, scene.dataset))
    if violations:
        raise ValidationFailed(violations)


class SceneStore:
    """Disk-backed scene collection with per-scene write serialization.

    Reads are lock-free against the in-memory cache; every mutation takes
    the scene's lock, re-validates the whole spec list, and persists
    atomically before the new revision becomes visible.
    """

    def __init__(self, root: Path | str):
        self.root = Path(root)
        self.scenes_dir = self.root / "scenes"
        self.exports_dir = self.root / "exports"
        self.scenes_dir.mkdir(parents=True, exist_ok=True)
        self.exports_dir.mkdir(parents=True, exist_ok=True)
        self._cache: dict[str, Scene] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()
        self._timelines: dict[tuple[str, int], KeyframeTimeline] = {}

    def _lock(self, scene_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(scene_id, threading.Lock())

    def _path(self, scene_id: str) -> Path:
        return self.scenes_dir / f"{scene_id}.json"

    def _persist(self, scene: Scene) -> None:
        path = self._path(scene.id)
        tmp = path.with_suffix(".json.tmp")
        tmp.write_bytes(scene_bytes(scene))
        os.replace(tmp, path)
        self._cache[scene.id] = scene

    def create_scene(
        self, csv_text: str, scene_id: str | None = None, title: str = ""
    ) -> Scene:
        dataset = parse_dataset(csv_text)
        scene_id = scene_id or uuid.uuid4().hex[:12]
        if self._path(scene_id).exists():
            raise ValidationFailed(
                [SpecViolation("DuplicateScene", f"scene already exists: {scene_id!r}")]
            )
        scene = Scene(
            id=scene_id,
            dataset=dataset,
            settings=AnimationSettings(),
            canvas=default_canvas(dataset.categories, title=title),
            specs=(),
            revision=1,
        )
        with self._lock(scene_id):
            self._persist(scene)
        return scene

    def get_scene(self, scene_id: str) -> Scene:
        scene = self._cache.get(scene_id)
        if scene is not None:
            return scene
        path = self._path(scene_id)
        if not path.exists():
            raise UnknownScene(scene_id)
        try:
            scene = scene_from_json(json.loads(path.read_text("utf-8")))
        except json.JSONDecodeError as exc:
            raise SceneFormatError(f"corrupt scene file {path}: {exc}") from exc
        self._cache[scene_id] = scene
        return scene

    def list_scenes(self) -> list[str]:
        return sorted(p.stem for p in self.scenes_dir.glob("*.json"))

    def _mutate(
        self, scene_id: str, expected_revision: int, fn: Callable[[Scene], Scene]
    ) -> Scene:
        with self._lock(scene_id):
            scene = self.get_scene(scene_id)
            if scene.revision != expected_revision:
                raise RevisionConflict(expected_revision, scene.revision)
            mutated = replace(fn(scene), revision=scene.revision + 1)
            _validate_scene_specs(mutated)
            self._persist(mutated)
            return mutated

    def update_settings(
        self,
        scene_id: str,
        expected_revision: int,
        settings_patch: dict | None = None,
        canvas_patch: dict | None = None,
    ) -> Scene:
        def apply(scene: Scene) -> Scene:
            settings = scene.settings
            canvas = scene.canvas
            if settings_patch:
                merged = settings_to_json(settings) | settings_patch
                try:
                    settings = settings_from_json(merged)
                except SceneFormatError as exc:
                    raise ValidationFailed(
                        [SpecViolation("InvalidSettings", str(exc))]
                    ) from exc
            if canvas_patch:
                merged = canvas_to_json(canvas) | canvas_patch
                try:
                    canvas = canvas_from_json(merged)
                except (SceneFormatError, ValueError) as exc:
                    raise ValidationFailed([SpecViolation("InvalidCanvas", str(exc))]) from exc
            return replace(scene, settings=settings, canvas=canvas)

        return self._mutate(scene_id, expected_revision, apply)

    def add_spec(self, scene_id: str, expected_revision: int, spec: ForeshadowSpec) -> Scene:
        return self._mutate(
            scene_id, expected_revision, lambda s: replace(s, specs=s.specs + (spec,))
        )

    def update_spec(
        self, scene_id: str, expected_revision: int, spec_id: str, spec: ForeshadowSpec
    ) -> Scene:
        def apply(scene: Scene) -> Scene:
            scene.spec_by_id(spec_id)  # raises UnknownSpec
            specs = tuple(spec if s.id == spec_id else s for s in scene.specs)
            return replace(scene, specs=specs)

        return self._mutate(scene_id, expected_revision, apply)

    def delete_spec(self, scene_id: str, expected_revision: int, spec_id: str) -> Scene:
        def apply(scene: Scene) -> Scene:
            scene.spec_by_id(spec_id)
            return replace(scene, specs=tuple(s for s in scene.specs if s.id != spec_id))

        return self._mutate(scene_id, expected_revision, apply)

    def edit_data_cell(
        self,
        scene_id: str,
        expected_revision: int,
        item_id: str,
        period_label: str,
        value: float,
    ) -> Scene:
        return self._mutate(
            scene_id,
            expected_revision,
            lambda s: replace(s, dataset=edit_cell(s.dataset, item_id, period_label, value)),
        )

    def timeline_for(self, scene: Scene) -> KeyframeTimeline:
        key = (scene.id, scene.revision)
        timeline = self._timelines.get(key)
        if timeline is None:
            timeline = compile_timeline(scene.dataset, scene.settings)
            if len(self._timelines) >= 8:
                self._timelines.pop(next(iter(self._timelines)))
            self._timelines[key] = timeline
        return timeline

    def preview(self, scene_id: str, frame_index: int) -> bytes:
        from .foreshadow import resolve_styles
        from .render import render_frame

        scene = self.get_scene(scene_id)
        timeline = self.timeline_for(scene)
        if not 0 <= frame_index < timeline.frame_count:
            raise FrameOutOfRange(
                f"frame {frame_index} outside [0, {timeline.frame_count})"
            )
        frame = timeline.frames[frame_index]
        overlay = resolve_styles(scene.specs, frame, timeline)
        return render_frame(frame, overlay, scene.canvas, scene.settings)

    def export(self, scene_id: str, out_dir: Path | str | None = None) -> tuple[dict, Path]:
        scene = self.get_scene(scene_id)
        timeline = self.timeline_for(scene)
        out = Path(out_dir) if out_dir is not None else self.exports_dir / scene_id
        manifest = export_animation(timeline, scene.specs, scene.canvas, out)
        return manifest, out
