"""Byte-deterministic SVG rendering of styled frames.

Output bytes are a pure function of the inputs: numbers are written with
at most 6 significant digits, attribute order is fixed, and nothing
time- or environment-dependent is embedded. Re-rendering identical
inputs therefore yields identical files, which the golden and
determinism tests depend on.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape, quoteattr

from .foreshadow import (
    ForeshadowSpec,
    StyleOverlay,
    SpecViolation,
    UnvalidatedSpec,
    _validate,
    active_intervals,
    resolve_styles,
)
from .timeline import AnimationSettings, FrameState, KeyframeTimeline, period_to_time

__all__ = [
    "CanvasSpec",
    "EmptyVisibleSet",
    "IoFailure",
    "default_canvas",
    "export_animation",
    "manifest_bytes",
    "render_frame",
]

RGB = tuple[int, int, int]

# Categories are assigned palette entries in first-appearance order,
# cycling when exhausted.
DEFAULT_PALETTE: tuple[RGB, ...] = (
    (78, 121, 167),
    (242, 142, 43),
    (225, 87, 89),
    (118, 183, 178),
    (89, 161, 79),
    (237, 201, 72),
    (176, 122, 161),
    (255, 157, 167),
    (156, 117, 95),
    (186, 176, 172),
)

GHOST_FILL_OPACITY = 0.35
GHOST_DASH = "6 4"
GHOST_STROKE: RGB = (40, 40, 40)

MANIFEST_NAME = "animation.json"


class EmptyVisibleSet(RuntimeError):
    """No item fell inside the visible slots; internal error."""


class IoFailure(OSError):
    """Wraps the failing path of an export write."""

    def __init__(self, path: Path, cause: OSError):
        self.path = path
        super().__init__(f"failed writing {path}: {cause}")


@dataclass(frozen=True)
class CanvasSpec:
    """Static drawing parameters shared by every frame of a scene."""

    width: int = 960
    height: int = 600
    margin_top: float = 70.0
    margin_right: float = 50.0
    margin_bottom: float = 40.0
    margin_left: float = 170.0
    bar_height_fraction: float = 0.72
    title: str = ""
    category_palette: dict[str, RGB] = field(default_factory=dict)

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("canvas dimensions must be positive")
        if not 0 < self.bar_height_fraction < 1:
            raise ValueError("bar_height_fraction must be in (0, 1)")
        if self.chart_width <= 0 or self.chart_height <= 0:
            raise ValueError("margins leave no drawable area")

    @property
    def chart_width(self) -> float:
        return self.width - self.margin_left - self.margin_right

    @property
    def chart_height(self) -> float:
        return self.height - self.margin_top - self.margin_bottom


def default_canvas(categories: Sequence[str], title: str = "") -> CanvasSpec:
    """Canvas with palette entries assigned in first-appearance order."""
    palette: dict[str, RGB] = {}
    for category in categories:
        if category not in palette:
            palette[category] = DEFAULT_PALETTE[len(palette) % len(DEFAULT_PALETTE)]
    return CanvasSpec(title=title, category_palette=palette)


def _fmt(x: float) -> str:
    if x == 0:  # normalize -0.0
        return "0"
    return f"{x:.6g}"


def _hex(color: RGB) -> str:
    r, g, b = color
    return f"#{r:02x}{g:02x}{b:02x}"


def render_frame(
    frame: FrameState,
    overlay: StyleOverlay,
    canvas: CanvasSpec,
    settings: AnimationSettings,
) -> bytes:
    """Render one styled frame to a standalone SVG document."""
    chart_x = canvas.margin_left
    chart_y = canvas.margin_top
    chart_w = canvas.chart_width
    chart_h = canvas.chart_height
    pitch = chart_h / settings.top_n
    bar_h = pitch * canvas.bar_height_fraction

    visible = [i for i in range(len(frame.item_ids)) if frame.visible[i]]
    if not visible:
        raise EmptyVisibleSet(f"frame {frame.index} has no visible items")
    max_value = max(frame.values[i] for i in visible)
    scale = chart_w / max_value if max_value > 0 else 0.0

    def bar_y(slot: float) -> float:
        return chart_y + (slot - 1.0) * pitch + (pitch - bar_h) / 2.0

    lines: list[str] = []
    lines.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{canvas.width}" '
        f'height="{canvas.height}" viewBox="0 0 {canvas.width} {canvas.height}" '
        f'font-family="Helvetica, Arial, sans-serif">'
    )
    lines.append(
        f'<defs><clipPath id="chart-band"><rect x="0" y="{_fmt(chart_y)}" '
        f'width="{canvas.width}" height="{_fmt(chart_h)}"/></clipPath></defs>'
    )
    lines.append(f'<rect width="{canvas.width}" height="{canvas.height}" fill="#ffffff"/>')
    if canvas.title:
        lines.append(
            f'<text class="title" x="{_fmt(canvas.width / 2)}" y="28" '
            f'text-anchor="middle" font-size="20" font-weight="bold" '
            f'fill="#1a1a1a">{escape(canvas.title)}</text>'
        )
    if overlay.banner_text is not None:
        lines.append(
            f'<text class="banner" x="{_fmt(canvas.width / 2)}" y="52" '
            f'text-anchor="middle" font-size="14" font-style="italic" '
            f'fill="#444444">{escape(overlay.banner_text)}</text>'
        )

    lines.append('<g clip-path="url(#chart-band)">')
    for i in visible:
        item_id = frame.item_ids[i]
        value = frame.values[i]
        y = bar_y(frame.slots[i])
        width = value * scale
        fill = _hex(canvas.category_palette.get(frame.categories[i], DEFAULT_PALETTE[0]))
        opacity = overlay.opacity.get(item_id, 1.0)
        text_y = y + bar_h / 2.0 + 4.0

        lines.append(f'<g class="bar" data-item={quoteattr(item_id)} opacity="{_fmt(opacity)}">')
        lines.append(
            f'<rect class="bar-rect" x="{_fmt(chart_x)}" y="{_fmt(y)}" '
            f'width="{_fmt(width)}" height="{_fmt(bar_h)}" fill="{fill}"/>'
        )
        contour = overlay.contours.get(item_id)
        if contour is not None:
            pad = contour.stroke_width / 2.0 + 1.0
            lines.append(
                f'<rect class="contour" x="{_fmt(chart_x - pad)}" y="{_fmt(y - pad)}" '
                f'width="{_fmt(width + 2 * pad)}" height="{_fmt(bar_h + 2 * pad)}" '
                f'fill="none" stroke="{_hex(contour.color)}" '
                f'stroke-width="{_fmt(contour.stroke_width)}"/>'
            )
        lines.append(
            f'<text class="bar-label" x="{_fmt(chart_x - 8)}" y="{_fmt(text_y)}" '
            f'text-anchor="end" font-size="13" fill="#1a1a1a">{escape(item_id)}</text>'
        )
        lines.append(
            f'<text class="bar-value" x="{_fmt(chart_x + width + 6)}" y="{_fmt(text_y)}" '
            f'font-size="12" fill="#555555">{_fmt(value)}</text>'
        )
        lines.append("</g>")

    for ghost in overlay.ghosts:
        ghost_scale = chart_w / ghost.frame_max_value if ghost.frame_max_value > 0 else 0.0
        g_width = ghost.value * ghost_scale
        g_y = bar_y(ghost.slot_position)
        try:
            fill = _hex(
                canvas.category_palette.get(
                    frame.categories[frame.item_ids.index(ghost.item_id)], DEFAULT_PALETTE[0]
                )
            )
        except ValueError:
            fill = _hex(DEFAULT_PALETTE[0])
        lines.append(f'<g class="ghost" data-item={quoteattr(ghost.item_id)}>')
        lines.append(
            f'<rect class="ghost-rect" x="{_fmt(chart_x)}" y="{_fmt(g_y)}" '
            f'width="{_fmt(g_width)}" height="{_fmt(bar_h)}" fill="{fill}" '
            f'fill-opacity="{_fmt(GHOST_FILL_OPACITY)}" stroke="{_hex(GHOST_STROKE)}" '
            f'stroke-width="1.5" stroke-dasharray="{GHOST_DASH}"/>'
        )
        lines.append(
            f'<text class="ghost-value" x="{_fmt(chart_x + g_width + 6)}" '
            f'y="{_fmt(g_y + bar_h / 2.0 + 4.0)}" font-size="12" font-style="italic" '
            f'fill="#444444">{_fmt(ghost.value)}</text>'
        )
        lines.append("</g>")
    lines.append("</g>")

    lines.append(
        f'<text class="period-label" x="{_fmt(canvas.width - canvas.margin_right - 8)}" '
        f'y="{_fmt(chart_y + chart_h - 14)}" text-anchor="end" font-size="36" '
        f'font-weight="bold" fill="#c0c0c0">'
        f"{escape(frame.period_label)}</text>"
    )
    lines.append("</svg>")
    return ("\n".join(lines) + "\n").encode("utf-8")


def frame_file_name(index: int) -> str:
    return f"frame_{index:05d}.svg"


def build_manifest(
    timeline: KeyframeTimeline, specs: Sequence[ForeshadowSpec]
) -> dict:
    """Machine-readable animation description consumed by players."""
    settings = timeline.settings
    return {
        "fps": settings.fps,
        "frame_count": timeline.frame_count,
        "frames": [frame_file_name(i) for i in range(timeline.frame_count)],
        "foreshadow_intervals": [
            {
                "spec_id": iv.spec_id,
                "start_s": iv.start_s,
                "end_s": iv.end_s,
                "target_period_s": iv.target_period_s,
            }
            for iv in active_intervals(specs, settings)
        ],
        "period_boundaries_s": [
            period_to_time(i, settings) for i in range(len(timeline.periods))
        ],
        "period_labels": list(timeline.periods),
    }


def manifest_bytes(manifest: dict) -> bytes:
    return (json.dumps(manifest, indent=2, sort_keys=True) + "\n").encode("utf-8")


def export_animation(
    timeline: KeyframeTimeline,
    specs: Sequence[ForeshadowSpec],
    canvas: CanvasSpec,
    out_dir: Path | str,
) -> dict:
    """Write every frame plus the animation manifest into out_dir.

    Stale frame files and manifest from a previous export are removed
    first so the directory is a pure function of the inputs. The
    manifest is written only after all frames succeed.
    """
    violations: list[SpecViolation] = []
    for spec in specs:
        violations.extend(_validate(spec, timeline.item_ids, len(timeline.periods)))
    if violations:
        raise UnvalidatedSpec(violations)

    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        for stale in out.glob("frame_*.svg"):
            stale.unlink()
        manifest_path = out / MANIFEST_NAME
        if manifest_path.exists():
            manifest_path.unlink()

        for frame in timeline.frames:
            overlay = resolve_styles(specs, frame, timeline)
            svg = render_frame(frame, overlay, canvas, timeline.settings)
            (out / frame_file_name(frame.index)).write_bytes(svg)

        manifest = build_manifest(timeline, specs)
        manifest_path.write_bytes(manifest_bytes(manifest))
    except OSError as exc:
        raise IoFailure(out, exc) from exc
    return manifest
