"""Shared fixtures, independent oracles, and SVG parsing helpers."""

from __future__ import annotations

import random
import xml.etree.ElementTree as ET

import pytest

from prefigure import ItemRecord, RankingDataset, parse_dataset

SAMPLE_CSV = """item,category,2018,2019,2020
alpha,tech,10,30,50
bravo,tech,40,35,20
charlie,retail,25,28,31
delta,retail,5,12,60
echo,energy,33,20,18
"""


@pytest.fixture
def sample_csv() -> str:
    return SAMPLE_CSV


@pytest.fixture
def sample_dataset() -> RankingDataset:
    return parse_dataset(SAMPLE_CSV)


def random_dataset(
    rng: random.Random, max_items: int = 12, max_periods: int = 8
) -> RankingDataset:
    """Small random dataset; integer values on purpose, to force rank ties."""
    n_items = rng.randint(2, max_items)
    n_periods = rng.randint(2, max_periods)
    items = tuple(
        ItemRecord(id=f"item{i:02d}", category=rng.choice(["a", "b", "c"]))
        for i in range(n_items)
    )
    values = tuple(
        tuple(float(rng.randint(0, 30)) for _ in range(n_periods)) for _ in range(n_items)
    )
    return RankingDataset(
        items=items,
        periods=tuple(f"p{t}" for t in range(n_periods)),
        values=values,
    )


def rank_oracle(values: list[float], ids: list[str]) -> list[int]:
    """Rank by descending value, ties by ascending id; independent of the
    library's implementation (dict lookup instead of index permutation)."""
    ordered = sorted(zip(values, ids), key=lambda t: (-t[0], t[1]))
    position = {item: k for k, (_, item) in enumerate(ordered, start=1)}
    return [position[item] for item in ids]


def event_oracle(dataset: RankingDataset, top_n: int, jump_threshold: int) -> list[tuple]:
    """Literal rule-by-rule event detection on per-period oracle ranks.

    Returns (kind, item, period, magnitude) tuples, fully sorted.
    """
    ids = list(dataset.item_ids)
    per_period = [
        dict(zip(ids, rank_oracle(list(dataset.column(p)), ids)))
        for p in range(len(dataset.periods))
    ]
    found: list[tuple] = []
    for p in range(1, len(dataset.periods)):
        prev, cur = per_period[p - 1], per_period[p]
        for item in ids:
            magnitude = abs(cur[item] - prev[item])
            if cur[item] == 1 and prev[item] != 1:
                found.append(("new_leader", item, p, magnitude))
            if prev[item] > top_n and cur[item] <= top_n:
                found.append(("enters_top_n", item, p, magnitude))
            if prev[item] <= top_n and cur[item] > top_n:
                found.append(("exits_top_n", item, p, magnitude))
            if magnitude >= jump_threshold:
                found.append(("rank_jump", item, p, magnitude))
            for other in ids:
                if (
                    prev[item] > prev[other]
                    and cur[item] < cur[other]
                    and cur[item] <= top_n
                    and cur[other] <= top_n
                ):
                    found.append(("overtake", item, p, magnitude))
    found.sort()
    return found


# --- SVG parsing -----------------------------------------------------------


def svg_root(svg: bytes) -> ET.Element:
    return ET.fromstring(svg)


def _groups(svg: bytes, cls: str):
    for el in svg_root(svg).iter():
        if el.tag.endswith("}g") and el.get("class") == cls:
            yield el


def _child(group: ET.Element, cls: str) -> ET.Element | None:
    for el in group:
        if el.get("class") == cls:
            return el
    return None


def svg_bars(svg: bytes) -> dict[str, dict[str, str]]:
    """item id -> {opacity, width, y, height, contour?} as raw attribute text."""
    out: dict[str, dict[str, str]] = {}
    for g in _groups(svg, "bar"):
        rect = _child(g, "bar-rect")
        assert rect is not None
        entry = {
            "opacity": g.get("opacity"),
            "width": rect.get("width"),
            "y": rect.get("y"),
            "height": rect.get("height"),
        }
        contour = _child(g, "contour")
        if contour is not None:
            entry["contour_stroke_width"] = contour.get("stroke-width")
            entry["contour_stroke"] = contour.get("stroke")
        out[g.get("data-item")] = entry
    return out


def svg_ghosts(svg: bytes) -> dict[str, dict[str, str]]:
    out: dict[str, dict[str, str]] = {}
    for g in _groups(svg, "ghost"):
        rect = _child(g, "ghost-rect")
        assert rect is not None
        out[g.get("data-item")] = {
            "width": rect.get("width"),
            "y": rect.get("y"),
            "fill-opacity": rect.get("fill-opacity"),
            "stroke-dasharray": rect.get("stroke-dasharray"),
        }
    return out


def svg_texts(svg: bytes, cls: str) -> list[str]:
    return [
        el.text or ""
        for el in svg_root(svg).iter()
        if el.tag.endswith("}text") and el.get("class") == cls
    ]


# --- acceptance criteria summary -------------------------------------------

ACCEPTANCE_LABELS = {
    "test_de_emphasis_fidelity": "de-emphasis fidelity",
    "test_rank_oracle_equivalence": "rank oracle equivalence",
    "test_boundary_exactness": "boundary exactness",
    "test_pre_scene_ghost_correctness": "pre-scene ghost correctness",
    "test_validation_gate": "validation gate",
    "test_determinism": "determinism",
    "test_event_detector_oracle": "event-detector oracle",
    "test_composition_order_independence": "composition order-independence",
}

_acceptance_results: dict[str, bool] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    base = report.nodeid.rsplit("::", 1)[-1].split("[")[0]
    if base in ACCEPTANCE_LABELS:
        passed = _acceptance_results.get(base, True) and report.outcome == "passed"
        _acceptance_results[base] = passed


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for base, label in ACCEPTANCE_LABELS.items():
        if base in _acceptance_results:
            verdict = "PASS" if _acceptance_results[base] else "FAIL"
            terminalreporter.write_line(f"[ACCEPTANCE] {label}: {verdict}")
