"""Compile a RankingDataset into fully resolved per-frame bar geometry.

Frames interpolate values and slot positions between consecutive periods.
Period boundaries map to fixed frame indices; those frames reproduce the
dataset exactly (no interpolation error), which downstream golden tests
and the pre-scene effect rely on.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Callable, Literal

from .dataset import RankingDataset, TooFewPeriods

__all__ = [
    "AnimationSettings",
    "Easing",
    "FrameState",
    "KeyframeTimeline",
    "OutOfRange",
    "compile_timeline",
    "compute_ranks",
    "period_to_time",
]

Easing = Literal["linear", "cubic_in_out"]

# Guard against float noise in fps * seconds_per_period (e.g. 0.1 * 30)
# pushing a boundary index past the intended frame.
_EPS = 1e-9


class OutOfRange(ValueError):
    """Raised for a period coordinate outside [0, periods - 1]."""


def _ease_linear(u: float) -> float:
    return u


def _ease_cubic_in_out(u: float) -> float:
    if u < 0.5:
        return 4.0 * u * u * u
    v = -2.0 * u + 2.0
    return 1.0 - (v * v * v) / 2.0


_EASINGS: dict[str, Callable[[float], float]] = {
    "linear": _ease_linear,
    "cubic_in_out": _ease_cubic_in_out,
}


@dataclass(frozen=True)
class AnimationSettings:
    """Playback parameters for the bar chart race."""

    seconds_per_period: float = 2.0
    fps: int = 30
    top_n: int = 10
    easing: Easing = "linear"

    def __post_init__(self):
        if not (math.isfinite(self.seconds_per_period) and self.seconds_per_period > 0):
            raise ValueError("seconds_per_period must be a positive finite number")
        if not isinstance(self.fps, int) or self.fps < 1:
            raise ValueError("fps must be an integer >= 1")
        if not isinstance(self.top_n, int) or self.top_n < 1:
            raise ValueError("top_n must be an integer >= 1")
        if self.easing not in _EASINGS:
            raise ValueError(f"unknown easing: {self.easing!r}")
        # Boundary frames must be distinct, so each period span needs at
        # least one frame.
        if self.fps * self.seconds_per_period < 1.0:
            raise ValueError("fps * seconds_per_period must be >= 1")

    @property
    def frames_per_period(self) -> float:
        return self.fps * self.seconds_per_period


@dataclass(frozen=True)
class FrameState:
    """Resolved geometry for one frame, indexed per item in dataset order.

    slot_position is the continuous 1-based vertical slot; it equals the
    integer rank exactly at period-boundary frames. rank is the integer
    rank at the nearest period. visible means slot_position <= top_n + 1.
    """

    index: int
    time_s: float
    item_ids: tuple[str, ...]
    categories: tuple[str, ...]
    values: tuple[float, ...]
    ranks: tuple[int, ...]
    slots: tuple[float, ...]
    visible: tuple[bool, ...]
    nearest_period: int
    period_label: str


@dataclass(frozen=True)
class KeyframeTimeline:
    """Every frame of the animation plus the period-to-frame mapping."""

    frames: tuple[FrameState, ...]
    settings: AnimationSettings
    period_boundaries: tuple[int, ...]
    periods: tuple[str, ...]
    item_ids: tuple[str, ...]
    categories: tuple[str, ...]

    @property
    def frame_count(self) -> int:
        return len(self.frames)

    @property
    def duration_s(self) -> float:
        return period_to_time(len(self.periods) - 1, self.settings)

    def frame_index_at_period(self, period: float) -> int:
        """Frame nearest to a (possibly fractional) period coordinate.

        Integral coordinates land exactly on their boundary frame.
        """
        n = len(self.periods)
        if not (0.0 <= period <= n - 1 + _EPS):
            raise OutOfRange(f"period {period} outside [0, {n - 1}]")
        i = min(int(period), n - 2)
        frac = period - i
        b0, b1 = self.period_boundaries[i], self.period_boundaries[i + 1]
        return b0 + int(round(frac * (b1 - b0)))


def compute_ranks(values: list[float], tie_break: list[str]) -> list[int]:
    """Rank by descending value; ties broken by ascending item id.

    Returns a permutation of 1..n aligned with the input order.
    """
    order = sorted(range(len(values)), key=lambda k: (-values[k], tie_break[k]))
    ranks = [0] * len(values)
    for position, k in enumerate(order, start=1):
        ranks[k] = position
    return ranks


def period_to_time(period_index: float, settings: AnimationSettings) -> float:
    """Seconds elapsed at a (possibly fractional) period coordinate."""
    if not math.isfinite(period_index) or period_index < 0:
        raise OutOfRange(f"period index {period_index} out of range")
    return period_index * settings.seconds_per_period


def _boundary_indices(n_periods: int, settings: AnimationSettings) -> tuple[int, ...]:
    q = settings.frames_per_period
    return tuple(math.ceil(i * q - _EPS) for i in range(n_periods))


def compile_timeline(dataset: RankingDataset, settings: AnimationSettings) -> KeyframeTimeline:
    """Resolve the whole animation to per-frame values, ranks and slots.

    Deterministic: identical inputs yield structurally identical
    timelines. Frame count is ceil((periods - 1) * seconds_per_period *
    fps) + 1, with one boundary frame per period.
    """
    n_periods = len(dataset.periods)
    if n_periods < 2:
        raise TooFewPeriods("compile_timeline needs at least 2 periods")

    item_ids = dataset.item_ids
    categories = dataset.categories
    ids = list(item_ids)
    period_values = [dataset.column(p) for p in range(n_periods)]
    period_ranks = [compute_ranks(list(col), ids) for col in period_values]

    boundaries = _boundary_indices(n_periods, settings)
    frame_count = boundaries[-1] + 1
    ease = _EASINGS[settings.easing]
    spp = settings.seconds_per_period
    visible_limit = settings.top_n + 1

    frames: list[FrameState] = []
    for f in range(frame_count):
        # Segment i covers frames [boundaries[i], boundaries[i+1]).
        i = bisect_right(boundaries, f) - 1
        if i >= n_periods - 1:
            i = n_periods - 2
        b0, b1 = boundaries[i], boundaries[i + 1]
        u = (f - b0) / (b1 - b0)

        if u == 0.0 or u == 1.0:
            period = i if u == 0.0 else i + 1
            values = period_values[period]
            ranks = period_ranks[period]
            slots = tuple(float(r) for r in ranks)
            nearest = period
        else:
            e = ease(u)
            v0, v1 = period_values[i], period_values[i + 1]
            r0, r1 = period_ranks[i], period_ranks[i + 1]
            values = tuple(a + e * (b - a) for a, b in zip(v0, v1))
            slots = tuple(a + e * (b - a) for a, b in zip(r0, r1))
            nearest = i if u <= 0.5 else i + 1
            ranks = period_ranks[nearest]

        frames.append(
            FrameState(
                index=f,
                time_s=(i + u) * spp,
                item_ids=item_ids,
                categories=categories,
                values=values,
                ranks=tuple(ranks),
                slots=slots,
                visible=tuple(s <= visible_limit for s in slots),
                nearest_period=nearest,
                period_label=dataset.periods[nearest],
            )
        )

    return KeyframeTimeline(
        frames=tuple(frames),
        settings=settings,
        period_boundaries=boundaries,
        periods=dataset.periods,
        item_ids=item_ids,
        categories=categories,
    )
