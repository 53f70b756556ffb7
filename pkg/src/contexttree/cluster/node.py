from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from ..core.geometry import convex_hull, coordsets_intersect
from ..core.timeranges import merge_time_ranges
from ..core.types import CoordinateSet, Tag, TimeRange


@dataclass(frozen=True)
class FeatureBinning:
    """Discretisation used to turn interaction features into strings."""

    time_of_day_bin: float = 4.0   # hours
    duration_log_base: float = 2.0  # applied to mean minutes
    count_log_base: float = 2.0
    area_log_base: float = 10.0     # applied to m^2

    def __post_init__(self):
        if not self.time_of_day_bin > 0:
            raise ValueError("time_of_day_bin must be positive")
        for name in ("duration_log_base", "count_log_base", "area_log_base"):
            if not getattr(self, name) > 1:
                raise ValueError(f"{name} must exceed 1")


@dataclass(eq=False)
class ContextNode:
    """A cluster in the context tree. Leaves wrap a single element.

    Nodes compare and hash by identity, so they can key similarity caches.
    """

    id: int
    tags: frozenset[Tag]
    times: tuple[TimeRange, ...]
    coordsets: tuple[CoordinateSet, ...]
    children: list["ContextNode"] = field(default_factory=list)
    leaf_element_id: Optional[str] = None

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def walk(self) -> Iterator["ContextNode"]:
        """Pre-order traversal."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def leaves(self) -> list["ContextNode"]:
        return [n for n in self.walk() if n.is_leaf]


@dataclass
class ContextTree:
    root: ContextNode
    lam: float
    feature_binning: FeatureBinning = field(default_factory=FeatureBinning)
    tag_sim_mode: str = "combined"

    def nodes(self) -> list[ContextNode]:
        return list(self.root.walk())


def leaf_node(node_id: int, interaction) -> ContextNode:
    e = interaction.element
    return ContextNode(node_id, e.tags, tuple(merge_time_ranges(interaction.times)), e.coordsets,
                       leaf_element_id=e.id)


def merge_coordsets(sets: Sequence[CoordinateSet]) -> tuple[CoordinateSet, ...]:
    """Keep coordinate sets apart unless they intersect; intersecting ones are
    replaced by the convex hull of their combined points, until none intersect."""
    result: list[CoordinateSet] = []
    for s in sets:
        merged = True
        while merged:
            merged = False
            for i, r in enumerate(result):
                if r == s or coordsets_intersect(r, s):
                    s = r if r == s else convex_hull(r.points + s.points)
                    del result[i]
                    merged = True
                    break
        result.append(s)
    return tuple(result)


def merge_clusters(group: Sequence[ContextNode], node_id: int) -> ContextNode:
    """Combine ``group`` into a new parent node whose children are the group."""
    if len(group) < 2:
        raise ValueError("merging needs at least two clusters")
    times = merge_time_ranges(*(c.times for c in group))
    tags = frozenset().union(*(c.tags for c in group))
    coordsets = merge_coordsets([s for c in group for s in c.coordsets])
    return ContextNode(node_id, tags, times, coordsets, children=list(group))
