"""Bar chart races with declarative visual foreshadowing.

Pipeline: parse a ranked time series (dataset), compile it into an
interpolated keyframe timeline (timeline), layer foreshadowing effects
on top (foreshadow), and emit deterministic SVG frames plus a manifest
(render). scene/service/cli wrap the same pipeline for persistence,
HTTP, and batch use.
"""

from .dataset import (
    DEFAULT_CATEGORY,
    DatasetError,
    ItemRecord,
    RankingDataset,
    edit_cell,
    parse_dataset,
    serialize_dataset,
)
from .events import (
    DEFAULT_JUMP_THRESHOLD,
    DEFAULT_LEAD_PERIODS,
    KeyEvent,
    detect_events,
    suggest_foreshadow,
)
from .foreshadow import (
    BANNER_SEPARATOR,
    DEFAULT_OFF_TARGET_OPACITY,
    ActiveInterval,
    Contour,
    DeEmphasis,
    ForeshadowSpec,
    GhostBar,
    PreScene,
    Prologue,
    SpecViolation,
    StyleOverlay,
    UnvalidatedSpec,
    active_intervals,
    classify,
    is_active,
    resolve_styles,
    validate_spec,
)
from .render import (
    CanvasSpec,
    EmptyVisibleSet,
    IoFailure,
    build_manifest,
    default_canvas,
    export_animation,
    frame_file_name,
    manifest_bytes,
    render_frame,
)
from .scene import (
    FrameOutOfRange,
    RevisionConflict,
    Scene,
    SceneFormatError,
    SceneStore,
    UnknownScene,
    UnknownSpec,
    ValidationFailed,
    scene_from_json,
    scene_to_json,
)
from .timeline import (
    AnimationSettings,
    FrameState,
    KeyframeTimeline,
    OutOfRange,
    compile_timeline,
    compute_ranks,
    period_to_time,
)

__version__ = "0.1.0"

__all__ = [
    "ActiveInterval",
    "AnimationSettings",
    "BANNER_SEPARATOR",
    "CanvasSpec",
    "Contour",
    "DEFAULT_CATEGORY",
    "DEFAULT_JUMP_THRESHOLD",
    "DEFAULT_LEAD_PERIODS",
    "DEFAULT_OFF_TARGET_OPACITY",
    "DatasetError",
    "DeEmphasis",
    "EmptyVisibleSet",
    "ForeshadowSpec",
    "FrameOutOfRange",
    "FrameState",
    "GhostBar",
    "IoFailure",
    "ItemRecord",
    "KeyEvent",
    "KeyframeTimeline",
    "OutOfRange",
    "PreScene",
    "Prologue",
    "RankingDataset",
    "RevisionConflict",
    "Scene",
    "SceneFormatError",
    "SceneStore",
    "SpecViolation",
    "StyleOverlay",
    "UnknownScene",
    "UnknownSpec",
    "UnvalidatedSpec",
    "ValidationFailed",
    "active_intervals",
    "build_manifest",
    "classify",
    "compile_timeline",
    "compute_ranks",
    "default_canvas",
    "detect_events",
    "edit_cell",
    "export_animation",
    "frame_file_name",
    "is_active",
    "manifest_bytes",
    "parse_dataset",
    "period_to_time",
    "render_frame",
    "resolve_styles",
    "scene_from_json",
    "scene_to_json",
    "serialize_dataset",
    "suggest_foreshadow",
    "validate_spec",
]
