"""Detect ranking changes worth foreshadowing.

The rules are deliberately literal: each consecutive period pair is
compared on full-dataset ranks, and every rule fires independently, so
one change can emit several events (a new leader is usually also a
rank_jump).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from .dataset import RankingDataset
from .foreshadow import Contour, ForeshadowSpec
from .timeline import compute_ranks

__all__ = ["EventKind", "KeyEvent", "detect_events", "suggest_foreshadow"]

EventKind = Literal["overtake", "new_leader", "enters_top_n", "exits_top_n", "rank_jump"]

DEFAULT_JUMP_THRESHOLD = 3
DEFAULT_LEAD_PERIODS = 1.0


@dataclass(frozen=True)
class KeyEvent:
    """A ranking change between period_index - 1 and period_index."""

    kind: EventKind
    item_id: str
    period_index: int
    magnitude: int


def detect_events(
    dataset: RankingDataset,
    top_n: int = 10,
    jump_threshold: int = DEFAULT_JUMP_THRESHOLD,
) -> list[KeyEvent]:
    """Scan consecutive period pairs and emit every matching rule.

    new_leader: an item attains rank 1 it did not hold.
    overtake: one event per ordered pair swap with both items ranked in
        the top_n at the current period, attributed to the rising item.
    enters_top_n / exits_top_n: the item crosses the top_n boundary.
    rank_jump: absolute rank change >= jump_threshold.

    The result is sorted by (period_index, kind, item_id) and therefore
    invariant under row permutation of the dataset.
    """
    if top_n < 1:
        raise ValueError("top_n must be >= 1")
    if jump_threshold < 1:
        raise ValueError("jump_threshold must be >= 1")

    ids = list(dataset.item_ids)
    ranks = [
        compute_ranks(list(dataset.column(p)), ids) for p in range(len(dataset.periods))
    ]

    events: list[KeyEvent] = []
    for p in range(1, len(dataset.periods)):
        prev, cur = ranks[p - 1], ranks[p]
        for i, item_id in enumerate(ids):
            delta = abs(cur[i] - prev[i])
            if cur[i] == 1 and prev[i] != 1:
                events.append(KeyEvent("new_leader", item_id, p, delta))
            if prev[i] > top_n and cur[i] <= top_n:
                events.append(KeyEvent("enters_top_n", item_id, p, delta))
            if prev[i] <= top_n and cur[i] > top_n:
                events.append(KeyEvent("exits_top_n", item_id, p, delta))
            if delta >= jump_threshold:
                events.append(KeyEvent("rank_jump", item_id, p, delta))
            for j in range(len(ids)):
                if (
                    prev[i] > prev[j]
                    and cur[i] < cur[j]
                    and cur[i] <= top_n
                    and cur[j] <= top_n
                ):
                    events.append(KeyEvent("overtake", item_id, p, delta))

    events.sort(key=lambda e: (e.period_index, e.kind, e.item_id, e.magnitude))
    return events


def suggest_foreshadow(
    event: KeyEvent, lead_periods: float = DEFAULT_LEAD_PERIODS
) -> ForeshadowSpec:
    """Draft a Contour spec leading up to the event.

    The draft starts lead_periods before the event (clamped to 0) and
    runs right up to it, so it always satisfies the validation rules.
    """
    if lead_periods <= 0:
        raise ValueError("lead_periods must be > 0")
    timing = max(0.0, event.period_index - lead_periods)
    return ForeshadowSpec(
        id=f"{event.kind}-{event.item_id}-p{event.period_index}",
        effects=(Contour(),),
        target_items=(event.item_id,),
        timing=timing,
        duration=event.period_index - timing,
        target_period=float(event.period_index),
    )
