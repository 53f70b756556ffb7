"""Attach candidate land-usage elements to each trajectory point."""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass

from .core.geometry import METRES_PER_DEGREE, bboxes_overlap, circle_bbox, circle_intersects_element
from .core.types import TrajectoryPoint
from .ingest import ElementStore

DEFAULT_CELL_M = 250.0
# Elements spanning more cells than this are kept in an always-scanned list.
MAX_CELLS_PER_ELEMENT = 4096


@dataclass(frozen=True, slots=True)
class AugmentedPoint:
    point: TrajectoryPoint
    element_ids: frozenset[str]


class SpatialIndex:
    """Uniform lat/lng grid over element bounding boxes.

    ``query`` never misses an element whose bounding box overlaps the query
    box; callers confirm candidates geometrically.
    """

    def __init__(self, store: ElementStore, cell_m: float = DEFAULT_CELL_M):
        if cell_m <= 0:
            raise ValueError("cell size must be positive")
        self.cell_m = cell_m
        self.bboxes: dict[str, tuple[float, float, float, float]] = {}
        for e in store:
            boxes = [c.bbox() for c in e.coordsets]
            self.bboxes[e.id] = (min(b[0] for b in boxes), min(b[1] for b in boxes),
                                 max(b[2] for b in boxes), max(b[3] for b in boxes))
        if self.bboxes:
            mean_lat = sum((b[0] + b[2]) / 2 for b in self.bboxes.values()) / len(self.bboxes)
        else:
            mean_lat = 0.0
        self.dlat = cell_m / METRES_PER_DEGREE
        self.dlng = self.dlat / max(math.cos(math.radians(mean_lat)), 0.01)
        self.cells: dict[tuple[int, int], list[str]] = defaultdict(list)
        self.large: list[str] = []
        for eid, box in self.bboxes.items():
            i0, j0, i1, j1 = self._cell_range(box)
            if (i1 - i0 + 1) * (j1 - j0 + 1) > MAX_CELLS_PER_ELEMENT:
                self.large.append(eid)
                continue
            for i in range(i0, i1 + 1):
                for j in range(j0, j1 + 1):
                    self.cells[(i, j)].append(eid)

    def _cell_range(self, box):
        return (math.floor(box[0] / self.dlat), math.floor(box[1] / self.dlng),
                math.floor(box[2] / self.dlat), math.floor(box[3] / self.dlng))

    def query(self, box: tuple[float, float, float, float]) -> set[str]:
        """Ids of elements whose bounding box overlaps ``box`` (min_lat, min_lng, max_lat, max_lng)."""
        i0, j0, i1, j1 = self._cell_range(box)
        found = set()
        if (i1 - i0 + 1) * (j1 - j0 + 1) > len(self.cells):
            candidates = self.bboxes.keys()
        else:
            candidates = set(self.large)
            for i in range(i0, i1 + 1):
                for j in range(j0, j1 + 1):
                    candidates.update(self.cells.get((i, j), ()))
        for eid in candidates:
            if bboxes_overlap(self.bboxes[eid], box):
                found.add(eid)
        return found


def build_index(store: ElementStore, cell_m: float = DEFAULT_CELL_M) -> SpatialIndex:
    return SpatialIndex(store, cell_m)


def extract_elements(p: TrajectoryPoint, index: SpatialIndex, store: ElementStore) -> frozenset[str]:
    """Ids of all elements partially or wholly inside the point's accuracy circle."""
    center = p.latlng
    candidates = index.query(circle_bbox(center, p.accuracy))
    return frozenset(eid for eid in candidates if circle_intersects_element(center, p.accuracy, store[eid]))


def augment_trajectory(points, index: SpatialIndex, store: ElementStore) -> list[AugmentedPoint]:
    return [AugmentedPoint(p, extract_elements(p, index, store)) for p in points]
