"""Visual foreshadowing: effect specs, validation, and per-frame styling.

A foreshadowing spec pairs one or more visual effects with a timing and a
duration (in period units) and points at a target period, the moment of
the event it builds up to. Effects must end at or before that moment.

Four effect kinds are supported. Prologue and PreScene are explicit (the
outcome is directly indicated); Contour and DeEmphasis are implicit (the
relevant items are hinted without revealing the outcome).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Sequence, Union

from .dataset import RankingDataset
from .timeline import AnimationSettings, FrameState, KeyframeTimeline, period_to_time

__all__ = [
    "ActiveInterval",
    "BANNER_SEPARATOR",
    "Contour",
    "DeEmphasis",
    "EffectKind",
    "ForeshadowClass",
    "ForeshadowSpec",
    "GhostBar",
    "PreScene",
    "Prologue",
    "SpecViolation",
    "StyleOverlay",
    "UnvalidatedSpec",
    "active_intervals",
    "classify",
    "resolve_styles",
    "validate_spec",
]

ForeshadowClass = Literal["explicit", "implicit"]

RGB = tuple[int, int, int]

DEFAULT_CONTOUR_WIDTH = 3.0
DEFAULT_CONTOUR_COLOR: RGB = (40, 40, 40)
DEFAULT_OFF_TARGET_OPACITY = 0.2

# Joins multiple active Prologue banners, in spec-id order.
BANNER_SEPARATOR = " — "


@dataclass(frozen=True)
class Prologue:
    """Text inserted above the chart to suggest the forthcoming event."""

    text: str


@dataclass(frozen=True)
class PreScene:
    """Shows the target's state at the target period ahead of time."""


@dataclass(frozen=True)
class Contour:
    """Outline drawn around the target bars."""

    stroke_width: float = DEFAULT_CONTOUR_WIDTH
    color: RGB = DEFAULT_CONTOUR_COLOR


@dataclass(frozen=True)
class DeEmphasis:
    """Dims every non-target bar so the targets stand out."""

    off_target_opacity: float = DEFAULT_OFF_TARGET_OPACITY


EffectKind = Union[Prologue, PreScene, Contour, DeEmphasis]


@dataclass(frozen=True)
class ForeshadowSpec:
    """One foreshadowing: effects, targets, and its time interval.

    timing, duration and target_period are in period units. The active
    interval is [timing, timing + duration) and must end at or before
    target_period.
    """

    id: str
    effects: tuple[EffectKind, ...]
    target_items: tuple[str, ...]
    timing: float
    duration: float
    target_period: float


@dataclass(frozen=True)
class SpecViolation:
    """A single violated invariant, identified by a stable code."""

    code: str
    message: str
    spec_id: str = ""


@dataclass(frozen=True)
class GhostBar:
    """Pre-scene geometry: where the target bar sits at the event.

    frame_max_value is the normalization basis (max visible value) of the
    target frame, so a renderer can reproduce that frame's bar width
    exactly without re-reading the timeline.
    """

    item_id: str
    slot_position: float
    value: float
    frame_max_value: float


@dataclass(frozen=True)
class StyleOverlay:
    """Per-frame styling resolved from the active foreshadowing specs."""

    opacity: dict[str, float]
    contours: dict[str, Contour] = field(default_factory=dict)
    banner_text: str | None = None
    ghosts: tuple[GhostBar, ...] = ()

    @classmethod
    def default(cls, item_ids: Sequence[str]) -> "StyleOverlay":
        return cls(opacity={item_id: 1.0 for item_id in item_ids})


class UnvalidatedSpec(ValueError):
    """A spec that fails validation reached a consuming operation."""

    def __init__(self, violations: list[SpecViolation]):
        self.violations = violations
        super().__init__("; ".join(f"{v.code}: {v.message}" for v in violations))


def classify(effect: EffectKind) -> ForeshadowClass:
    """Explicit effects reveal the outcome; implicit ones only hint."""
    if isinstance(effect, (Prologue, PreScene)):
        return "explicit"
    if isinstance(effect, (Contour, DeEmphasis)):
        return "implicit"
    raise TypeError(f"not an effect: {effect!r}")


def _finite(x: float) -> bool:
    return isinstance(x, (int, float)) and math.isfinite(x)


def _validate_effect(effect: EffectKind, spec_id: str) -> list[SpecViolation]:
    out = []
    if isinstance(effect, Prologue):
        if not effect.text:
            out.append(SpecViolation("EmptyPrologueText", "Prologue text is empty", spec_id))
    elif isinstance(effect, Contour):
        if not (_finite(effect.stroke_width) and effect.stroke_width > 0):
            out.append(
                SpecViolation(
                    "NonPositiveStrokeWidth",
                    f"contour stroke width must be > 0, got {effect.stroke_width}",
                    spec_id,
                )
            )
        if len(effect.color) != 3 or any(
            not isinstance(c, int) or not 0 <= c <= 255 for c in effect.color
        ):
            out.append(
                SpecViolation("InvalidColor", f"bad RGB triple: {effect.color!r}", spec_id)
            )
    elif isinstance(effect, DeEmphasis):
        if not (_finite(effect.off_target_opacity) and 0 < effect.off_target_opacity <= 1):
            out.append(
                SpecViolation(
                    "OpacityOutOfRange",
                    f"off-target opacity must be in (0, 1], got {effect.off_target_opacity}",
                    spec_id,
                )
            )
    return out


def _validate(spec: ForeshadowSpec, item_ids: Sequence[str], n_periods: int) -> list[SpecViolation]:
    v: list[SpecViolation] = []
    sid = spec.id
    if not sid:
        v.append(SpecViolation("EmptySpecId", "spec id is empty", sid))
    if not spec.effects:
        v.append(SpecViolation("NoEffects", "spec has no effects", sid))
    for effect in spec.effects:
        v.extend(_validate_effect(effect, sid))
    if not spec.target_items:
        v.append(SpecViolation("NoTargets", "spec has no target items", sid))
    known = set(item_ids)
    for item_id in spec.target_items:
        if item_id not in known:
            v.append(
                SpecViolation("UnknownTargetItem", f"target item not in dataset: {item_id!r}", sid)
            )

    for name, value in (
        ("timing", spec.timing),
        ("duration", spec.duration),
        ("target_period", spec.target_period),
    ):
        if not _finite(value):
            v.append(SpecViolation("NonFiniteNumber", f"{name} is not finite: {value!r}", sid))
    if not all(_finite(x) for x in (spec.timing, spec.duration, spec.target_period)):
        return v

    if spec.timing < 0:
        v.append(SpecViolation("NegativeTiming", f"timing {spec.timing} < 0", sid))
    if spec.duration <= 0:
        v.append(SpecViolation("NonPositiveDuration", f"duration {spec.duration} <= 0", sid))
    if spec.target_period > n_periods - 1:
        v.append(
            SpecViolation(
                "TargetPeriodOutOfRange",
                f"target period {spec.target_period} past last period {n_periods - 1}",
                sid,
            )
        )
    if spec.timing + spec.duration > spec.target_period:
        v.append(
            SpecViolation(
                "EndsAfterEvent",
                f"effect ends at {spec.timing + spec.duration}, "
                f"after the target period {spec.target_period}",
                sid,
            )
        )
    return v


def validate_spec(spec: ForeshadowSpec, dataset: RankingDataset) -> list[SpecViolation]:
    """Check every spec invariant; an empty list means the spec is valid."""
    return _validate(spec, dataset.item_ids, len(dataset.periods))


def is_active(spec: ForeshadowSpec, time_s: float, settings: AnimationSettings) -> bool:
    start = period_to_time(spec.timing, settings)
    end = period_to_time(spec.timing + spec.duration, settings)
    return start <= time_s < end


def resolve_styles(
    specs: Sequence[ForeshadowSpec], frame: FrameState, timeline: KeyframeTimeline
) -> StyleOverlay:
    """Merge the specs active at this frame into one style overlay.

    Composition is order-independent: opacities take the per-item minimum
    over active DeEmphasis specs, contours and ghosts union (first spec in
    id order wins a contour conflict), banners concatenate in id order.
    """
    all_violations: list[SpecViolation] = []
    for spec in specs:
        all_violations.extend(_validate(spec, timeline.item_ids, len(timeline.periods)))
    if all_violations:
        raise UnvalidatedSpec(all_violations)

    overlay_opacity = {item_id: 1.0 for item_id in frame.item_ids}
    contours: dict[str, Contour] = {}
    banners: list[str] = []
    ghosts: set[GhostBar] = set()

    for spec in sorted(specs, key=lambda s: s.id):
        if not is_active(spec, frame.time_s, timeline.settings):
            continue
        targets = set(spec.target_items)
        for effect in spec.effects:
            if isinstance(effect, DeEmphasis):
                for item_id in frame.item_ids:
                    if item_id not in targets:
                        overlay_opacity[item_id] = min(
                            overlay_opacity[item_id], effect.off_target_opacity
                        )
            elif isinstance(effect, Contour):
                for item_id in spec.target_items:
                    contours.setdefault(item_id, effect)
            elif isinstance(effect, Prologue):
                banners.append(effect.text)
            elif isinstance(effect, PreScene):
                ghosts.update(_ghosts_for(spec, timeline))

    return StyleOverlay(
        opacity=overlay_opacity,
        contours=contours,
        banner_text=BANNER_SEPARATOR.join(banners) if banners else None,
        ghosts=tuple(sorted(ghosts, key=lambda g: (g.item_id, g.value, g.slot_position))),
    )


def _ghosts_for(spec: ForeshadowSpec, timeline: KeyframeTimeline) -> list[GhostBar]:
    target_frame = timeline.frames[timeline.frame_index_at_period(spec.target_period)]
    visible_values = [v for v, vis in zip(target_frame.values, target_frame.visible) if vis]
    frame_max = max(visible_values, default=0.0)
    ghosts = []
    for item_id in spec.target_items:
        i = target_frame.item_ids.index(item_id)
        ghosts.append(
            GhostBar(
                item_id=item_id,
                slot_position=target_frame.slots[i],
                value=target_frame.values[i],
                frame_max_value=frame_max,
            )
        )
    return ghosts


@dataclass(frozen=True)
class ActiveInterval:
    """A spec's active range in seconds, for timeline display."""

    spec_id: str
    start_s: float
    end_s: float
    target_period_s: float


def active_intervals(
    specs: Sequence[ForeshadowSpec], settings: AnimationSettings
) -> list[ActiveInterval]:
    """Intervals in seconds, sorted by start time then spec id."""
    intervals = [
        ActiveInterval(
            spec_id=spec.id,
            start_s=period_to_time(spec.timing, settings),
            end_s=period_to_time(spec.timing + spec.duration, settings),
            target_period_s=period_to_time(spec.target_period, settings),
        )
        for spec in specs
    ]
    intervals.sort(key=lambda iv: (iv.start_s, iv.spec_id))
    return intervals
