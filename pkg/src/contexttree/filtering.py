"""Temporal-buffer weighted filter over augmented points.

Each point under consideration is scored against the points within ``delta``
seconds either side of it. An element's score grows with the number of points
listing it, their accuracy and their temporal closeness. Elements whose
max-normalised score exceeds ``t`` are kept.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterator, Sequence

from .augment import AugmentedPoint
from .errors import AllZero

DEFAULT_DELTA = 1200.0
DEFAULT_T = 0.8


@dataclass(frozen=True)
class FilterParams:
    delta: float = DEFAULT_DELTA
    t: float = DEFAULT_T

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if not 0.0 <= self.t <= 1.0:
            raise ValueError(f"threshold must lie in [0, 1], got {self.t}")


@dataclass(frozen=True)
class BufferWindow:
    points: Sequence[AugmentedPoint]
    index: int
    start: int = 0  # position of points[0] in the full trajectory

    @property
    def current(self) -> AugmentedPoint:
        return self.points[self.index]


def _gap(a: AugmentedPoint, b: AugmentedPoint) -> float:
    return abs(b.point.timestamp - a.point.timestamp)


def score_elements(window: BufferWindow, delta: float) -> dict[str, float]:
    """Score every element listed in the window.

    ``score(e) = sum(1/a_p * (1 - dist(p, p_c)/delta) for p in P_e) * |P_e|``
    where ``P_e`` are the window points listing ``e`` and ``dist`` is the
    absolute time difference in seconds.
    """
    tc = window.current.point.timestamp
    weight = defaultdict(float)
    count = defaultdict(int)
    for ap in window.points:
        w = (1.0 / ap.point.accuracy) * (1.0 - abs(ap.point.timestamp - tc) / delta)
        for eid in ap.element_ids:
            weight[eid] += w
            count[eid] += 1
    return {eid: weight[eid] * count[eid] for eid in weight}


def normalise_scores(scores: dict[str, float]) -> dict[str, float]:
    if not scores:
        raise ValueError("no scores to normalise")
    top = max(scores.values())
    if top <= 0.0:
        raise AllZero()
    return {eid: s / top for eid, s in scores.items()}


def select_elements(norm: dict[str, float], t: float) -> set[str]:
    return {eid for eid, s in norm.items() if s > t}


def filter_window(window: BufferWindow, params: FilterParams) -> AugmentedPoint:
    """Filter the point under consideration; its output ids are a subset of its input ids."""
    cur = window.current
    scores = score_elements(window, params.delta)
    if not scores:
        return AugmentedPoint(cur.point, frozenset())
    try:
        keep = select_elements(normalise_scores(scores), params.t)
    except AllZero:
        keep = set()
    return AugmentedPoint(cur.point, cur.element_ids & keep)


def iter_windows(aug: Sequence[AugmentedPoint], delta: float) -> Iterator[BufferWindow]:
    """Yield the buffers visited by the buffer-management walk.

    Leading points before the first full half-buffer are context only, and
    the points left in the final buffer are never considered.
    """
    n = len(aug)
    if n == 0:
        return
    lo, hi = 0, 1          # buffer is aug[lo:hi]; remaining input is aug[hi:]
    c = None               # absolute position of the point under consideration
    while hi < n:
        if c is None and _gap(aug[lo], aug[hi]) > delta:
            c = hi - 1
        elif c is not None and _gap(aug[c], aug[hi]) > delta:
            break
        else:
            hi += 1
    if c is None:
        return
    while hi < n:
        yield BufferWindow(aug[lo:hi], c - lo, lo)
        c += 1
        if c == hi:
            hi += 1
        while _gap(aug[lo], aug[c]) > delta:
            lo += 1
        while hi < n and _gap(aug[c], aug[hi]) <= delta:
            hi += 1


def _edge_window(aug: Sequence[AugmentedPoint], i: int, delta: float) -> BufferWindow:
    lo = i
    while lo > 0 and _gap(aug[lo - 1], aug[i]) <= delta:
        lo -= 1
    hi = i + 1
    while hi < len(aug) and _gap(aug[i], aug[hi]) <= delta:
        hi += 1
    return BufferWindow(aug[lo:hi], i - lo, lo)


def filter_trajectory(aug: Sequence[AugmentedPoint], params: FilterParams = FilterParams(),
                      edge_windows: bool = False) -> list[AugmentedPoint]:
    """Run the buffered filter over an augmented trajectory.

    With ``edge_windows`` the points the buffer walk skips at either end are
    also emitted, each filtered against the partial window around it.
    """
    aug = list(aug)
    out: dict[int, AugmentedPoint] = {}
    for w in iter_windows(aug, params.delta):
        out[w.start + w.index] = filter_window(w, params)
    if edge_windows:
        for i in range(len(aug)):
            if i not in out:
                out[i] = filter_window(_edge_window(aug, i, params.delta), params)
    return [out[i] for i in sorted(out)]

