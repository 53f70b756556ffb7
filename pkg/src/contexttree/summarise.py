"""Collapse filtered points into per-element interaction periods."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .augment import AugmentedPoint
from .core.types import LandUsageElement, TimeRange
from .ingest import ElementStore

DEFAULT_T_MAX = 1200.0


@dataclass(frozen=True)
class ElementInteraction:
    element: LandUsageElement
    times: tuple[TimeRange, ...]


def interaction_periods(timestamps: Sequence[float], t_max: float) -> list[TimeRange]:
    """Split sorted timestamps wherever consecutive ones are more than ``t_max`` apart."""
    periods = []
    begin = prev = timestamps[0]
    for ts in timestamps[1:]:
        if ts - prev > t_max:
            periods.append(TimeRange(begin, prev))
            begin = ts
        prev = ts
    periods.append(TimeRange(begin, prev))
    return periods


def summarise(filtered: Sequence[AugmentedPoint], store: ElementStore,
              t_max: float = DEFAULT_T_MAX) -> list[ElementInteraction]:
    """One interaction per element seen, ordered by first contact then id."""
    if t_max < 0:
        raise ValueError("t_max must be non-negative")
    seen: dict[str, list[float]] = {}
    for ap in sorted(filtered, key=lambda a: a.point.timestamp):
        for eid in ap.element_ids:
            seen.setdefault(eid, []).append(ap.point.timestamp)
    order = sorted(seen, key=lambda eid: (seen[eid][0], eid))
    return [ElementInteraction(store[eid], tuple(interaction_periods(seen[eid], t_max))) for eid in order]
