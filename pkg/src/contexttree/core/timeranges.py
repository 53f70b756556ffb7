from __future__ import annotations

from typing import Iterable

from .types import TimeRange


def merge_time_ranges(*groups: Iterable[TimeRange]) -> tuple[TimeRange, ...]:
    """Union any number of time-range collections into maximal disjoint ranges.

    Ranges that overlap or touch (``a.end >= b.begin``) are combined. The
    result is sorted by ``begin``.
    """
    ranges = sorted(r for group in groups for r in group)
    merged: list[TimeRange] = []
    for r in ranges:
        if merged and merged[-1].end >= r.begin:
            last = merged[-1]
            if r.end > last.end:
                merged[-1] = TimeRange(last.begin, r.end)
        else:
            merged.append(r)
    return tuple(merged)


def total_duration(ranges: Iterable[TimeRange]) -> float:
    return sum(r.duration for r in ranges)
