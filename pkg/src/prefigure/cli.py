"""Command line entry points: render, detect, serve.

Exit codes: 0 success, 1 I/O or parse failure (diagnostics on stderr),
2 spec validation failure (one violation per line on stdout so scripts
can grep the codes).
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .dataset import DatasetError, parse_dataset
from .events import DEFAULT_JUMP_THRESHOLD, detect_events
from .foreshadow import SpecViolation, validate_spec
from .render import IoFailure, default_canvas, export_animation
from .scene import (
    SceneFormatError,
    SceneStore,
    canvas_from_json,
    settings_from_json,
    spec_from_json,
)
from .timeline import compile_timeline

__all__ = ["main"]


def _fail(message: str) -> None:
    click.echo(message, err=True)
    raise SystemExit(1)


def _read_text(path: Path) -> str:
    try:
        return path.read_text("utf-8-sig")
    except OSError as exc:
        _fail(f"cannot read {path}: {exc.strerror or exc}")
        raise AssertionError("unreachable")


@click.group()
def main() -> None:
    """Compile ranked time series into foreshadowed bar chart races."""


@main.command()
@click.option("--data", "data_path", required=True, type=click.Path(path_type=Path),
              help="CSV table: item,category,<period columns>.")
@click.option("--scene", "scene_path", type=click.Path(path_type=Path), default=None,
              help="Scene JSON (settings, canvas, foreshadow specs).")
@click.option("--out", "out_dir", required=True, type=click.Path(path_type=Path),
              help="Output directory for SVG frames and animation.json.")
@click.option("--fps", type=int, default=None, help="Override frames per second.")
@click.option("--seconds-per-period", type=float, default=None,
              help="Override seconds of animation per data period.")
@click.option("--top-n", type=int, default=None, help="Override visible bar count.")
@click.option("--easing", type=click.Choice(["linear", "cubic_in_out"]), default=None,
              help="Override interpolation easing.")
def render(data_path: Path, scene_path: Path | None, out_dir: Path,
           fps: int | None, seconds_per_period: float | None,
           top_n: int | None, easing: str | None) -> None:
    """Export the full frame sequence plus manifest for one dataset."""
    try:
        dataset = parse_dataset(_read_text(data_path))
    except DatasetError as exc:
        _fail(f"{exc.code}: {exc}")

    doc: dict = {}
    if scene_path is not None:
        try:
            doc = json.loads(_read_text(scene_path))
        except json.JSONDecodeError as exc:
            _fail(f"SceneFormat: {scene_path} is not valid JSON: {exc}")
        if not isinstance(doc, dict):
            _fail(f"SceneFormat: {scene_path} must hold a JSON object")

    try:
        settings = settings_from_json(doc.get("settings", {}))
        canvas = (canvas_from_json(doc["canvas"]) if "canvas" in doc
                  else default_canvas(dataset.categories))
        specs = tuple(spec_from_json(s) for s in doc.get("specs", []))
    except SceneFormatError as exc:
        _fail(str(exc))
        raise AssertionError("unreachable")

    overrides = {}
    if fps is not None:
        overrides["fps"] = fps
    if seconds_per_period is not None:
        overrides["seconds_per_period"] = seconds_per_period
    if top_n is not None:
        overrides["top_n"] = top_n
    if easing is not None:
        overrides["easing"] = easing
    if overrides:
        try:
            settings = settings_from_json(
                {
                    "seconds_per_period": settings.seconds_per_period,
                    "fps": settings.fps,
                    "top_n": settings.top_n,
                    "easing": settings.easing,
                }
                | overrides
            )
        except SceneFormatError as exc:
            _fail(str(exc))

    violations: list[SpecViolation] = []
    seen: set[str] = set()
    for spec in specs:
        if spec.id in seen:
            violations.append(
                SpecViolation("DuplicateSpecId", f"spec id used twice: {spec.id!r}", spec.id)
            )
        seen.add(spec.id)
        violations.extend(validate_spec(spec, dataset))
    if violations:
        for v in violations:
            click.echo(f"{v.code} spec={v.spec_id} {v.message}")
        raise SystemExit(2)

    try:
        timeline = compile_timeline(dataset, settings)
        export_animation(timeline, specs, canvas, out_dir)
    except IoFailure as exc:
        _fail(f"IoFailure: {exc}")
    except DatasetError as exc:
        _fail(f"{exc.code}: {exc}")
    click.echo(str(Path(out_dir) / "animation.json"))


@main.command()
@click.option("--data", "data_path", required=True, type=click.Path(path_type=Path),
              help="CSV table: item,category,<period columns>.")
@click.option("--top-n", type=int, default=10, show_default=True,
              help="Rank boundary for enters/exits/overtake events.")
@click.option("--jump", type=int, default=DEFAULT_JUMP_THRESHOLD, show_default=True,
              help="Minimum rank change to report as a jump.")
def detect(data_path: Path, top_n: int, jump: int) -> None:
    """Print notable rank changes, one JSON object per line."""
    try:
        dataset = parse_dataset(_read_text(data_path))
        events = detect_events(dataset, top_n=top_n, jump_threshold=jump)
    except DatasetError as exc:
        _fail(f"{exc.code}: {exc}")
        raise AssertionError("unreachable")
    except ValueError as exc:
        _fail(str(exc))
        raise AssertionError("unreachable")
    for event in events:
        click.echo(
            json.dumps(
                {
                    "kind": event.kind,
                    "item_id": event.item_id,
                    "period_index": event.period_index,
                    "magnitude": event.magnitude,
                },
                sort_keys=True,
            )
        )


@main.command()
@click.option("--store", "store_dir", required=True, type=click.Path(path_type=Path),
              help="Directory for scene documents and exports.")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8765, show_default=True)
@click.option("--ui", "ui_dir", type=click.Path(path_type=Path), default=None,
              help="Serve this directory of static files at /ui.")
def serve(store_dir: Path, host: str, port: int, ui_dir: Path | None) -> None:
    """Run the scene authoring HTTP service."""
    import uvicorn
    from .service import create_app

    app = create_app(SceneStore(store_dir))
    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    sys.exit(main())
