"""Immutable value types shared by every pipeline stage.

Instants are UTC POSIX seconds (floats); coordinates are ``(lat, lng)`` tuples
in degrees.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

MIN_ACCURACY_M = 1.0


@dataclass(frozen=True, slots=True)
class TrajectoryPoint:
    timestamp: float
    lat: float
    lng: float
    accuracy: float

    def __post_init__(self):
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"latitude out of range: {self.lat}")
        if not -180.0 <= self.lng <= 180.0:
            raise ValueError(f"longitude out of range: {self.lng}")
        if not self.accuracy > 0:
            raise ValueError(f"accuracy must be positive: {self.accuracy}")

    @property
    def latlng(self) -> tuple[float, float]:
        return (self.lat, self.lng)


Trajectory = list  # list[TrajectoryPoint], sorted by timestamp


@dataclass(frozen=True, slots=True, order=True)
class Tag:
    """A ``key:value`` pair; both parts are stored lower-cased."""

    key: str
    value: str = ""

    def __post_init__(self):
        if not self.key:
            raise ValueError("tag key must be non-empty")
        object.__setattr__(self, "key", self.key.lower())
        object.__setattr__(self, "value", self.value.lower())

    def __str__(self):
        return f"{self.key}:{self.value}"


@dataclass(frozen=True, slots=True, order=True)
class TimeRange:
    begin: float
    end: float

    def __post_init__(self):
        if self.end < self.begin:
            raise ValueError(f"time range ends before it begins: {self.begin} > {self.end}")

    @property
    def duration(self) -> float:
        return self.end - self.begin


@dataclass(frozen=True, slots=True)
class CoordinateSet:
    points: tuple[tuple[float, float], ...]
    closed: bool = False

    def __post_init__(self):
        pts = tuple((float(lat), float(lng)) for lat, lng in self.points)
        object.__setattr__(self, "points", pts)
        if not pts:
            raise ValueError("coordinate set needs at least one point")
        if self.closed and len(set(pts)) < 3:
            raise ValueError("closed coordinate set needs at least three distinct points")

    def bbox(self) -> tuple[float, float, float, float]:
        """``(min_lat, min_lng, max_lat, max_lng)``."""
        lats = [p[0] for p in self.points]
        lngs = [p[1] for p in self.points]
        return (min(lats), min(lngs), max(lats), max(lngs))


@dataclass(frozen=True, slots=True)
class LandUsageElement:
    id: str
    tags: frozenset[Tag]
    coordsets: tuple[CoordinateSet, ...]
    members: Optional[tuple[str, ...]] = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "tags", frozenset(self.tags))
        object.__setattr__(self, "coordsets", tuple(self.coordsets))
        if self.members is not None:
            object.__setattr__(self, "members", tuple(self.members))
        if not self.coordsets:
            raise ValueError(f"element {self.id!r} has no geometry")
