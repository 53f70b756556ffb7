"""Cost/benefit pruning of context trees.

A node's cost is what storing it adds on top of its parent: a fixed penalty
``xi`` plus the time ranges, coordinate sets and vertices it holds that the
parent does not hold verbatim. Its utility is the share of the parent's
duration, area and tags it does *not* account for. Nodes whose
utility/cost falls below ``theta`` are removed bottom-up.

Information adds seconds, square metres and tag counts as written, so large
areas or long durations dominate it.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional

from .cluster.node import ContextNode, ContextTree
from .cluster.similarity import HybridDistance
from .core.geometry import area_m2
from .core.timeranges import total_duration
from .ingest import Taxonomy

DEFAULT_THETA = 0.2
DEFAULT_XI = 1.0
COORD_DECIMALS = 9  # structural equality of coordinates to 1e-9 degrees


@dataclass(frozen=True)
class PruneParams:
    theta: float = DEFAULT_THETA
    xi: float = DEFAULT_XI

    def __post_init__(self):
        if self.theta < 0:
            raise ValueError(f"theta must be non-negative, got {self.theta}")
        if not self.xi > 0:
            raise ValueError(f"xi must be positive, got {self.xi}")


@dataclass(frozen=True)
class PruneReport:
    unpruned_count: int
    pruned_count: int
    total_information: float
    avg_leaf_hcd: float

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


def _point_key(p):
    return (round(p[0], COORD_DECIMALS), round(p[1], COORD_DECIMALS))


def _coordset_key(s):
    return (s.closed, tuple(_point_key(p) for p in s.points))


def cost(c: ContextNode, p: ContextNode, xi: float) -> float:
    times = len(set(c.times) - set(p.times))
    coordsets = len({_coordset_key(s) for s in c.coordsets} - {_coordset_key(s) for s in p.coordsets})
    c_points = {_point_key(q) for s in c.coordsets for q in s.points}
    p_points = {_point_key(q) for s in p.coordsets for q in s.points}
    return xi + times + coordsets + len(c_points - p_points)


def _area(c: ContextNode) -> float:
    return sum(area_m2(s) for s in c.coordsets)


def information(c: ContextNode) -> float:
    """Total duration (s) + total area (m^2) + number of tags."""
    return total_duration(c.times) + _area(c) + len(c.tags)


def _ratio(num: float, den: float) -> float:
    return num / den if den > 0 else 1.0


def utility(c: ContextNode, p: ContextNode) -> float:
    covered = (_ratio(total_duration(c.times), total_duration(p.times))
               + _ratio(_area(c), _area(p))
               + _ratio(len(c.tags), len(p.tags))) / 3.0
    return min(1.0, max(0.0, 1.0 - covered))


def cost_benefit(c: ContextNode, p: ContextNode, xi: float) -> float:
    return utility(c, p) / cost(c, p, xi)


def _postorder(root: ContextNode) -> list[tuple[ContextNode, Optional[ContextNode]]]:
    out = []
    stack = [(root, None, False)]
    while stack:
        node, parent, expanded = stack.pop()
        if expanded:
            out.append((node, parent))
            continue
        stack.append((node, parent, True))
        for child in reversed(node.children):
            stack.append((child, node, False))
    return out


def pruned_ids(tree: ContextTree, params: PruneParams) -> set[int]:
    """Ids of nodes removed by a depth-first pass; the root is never removed."""
    pruned: set[int] = set()
    for node, parent in _postorder(tree.root):
        if parent is None:
            continue
        if all(ch.id in pruned for ch in node.children) and cost_benefit(node, parent, params.xi) < params.theta:
            pruned.add(node.id)
    return pruned


def _copy_without(node: ContextNode, pruned: set[int]) -> ContextNode:
    kept = [_copy_without(ch, pruned) for ch in node.children if ch.id not in pruned]
    return dataclasses.replace(node, children=kept)


def survivor_leaves(root: ContextNode, pruned: set[int]) -> list[ContextNode]:
    out = []
    stack = [root]
    while stack:
        node = stack.pop()
        kids = [ch for ch in node.children if ch.id not in pruned]
        if kids:
            stack.extend(reversed(kids))
        else:
            out.append(node)
    return out


def mean_pairwise_hcd(nodes: Iterable[ContextNode], metric: HybridDistance) -> float:
    nodes = list(nodes)
    if len(nodes) < 2:
        return 0.0
    total = 0.0
    count = 0
    for a, b in combinations(nodes, 2):
        total += metric(a, b)
        count += 1
    return total / count


def prune_tree(tree: ContextTree, params: PruneParams, tax: Taxonomy,
               metric: Optional[HybridDistance] = None) -> tuple[ContextTree, PruneReport]:
    """Prune ``tree`` and report on the surviving nodes.

    ``metric`` may be shared across calls on the same tree to reuse cached
    distances.
    """
    metric = metric or HybridDistance(tax, tree.lam, tree.feature_binning, tree.tag_sim_mode)
    pruned = pruned_ids(tree, params)
    # a node is only pruned after all its children, so survivors form a rooted subtree
    survivors = [n for n in tree.root.walk() if n.id not in pruned]
    report = PruneReport(
        unpruned_count=len(survivors),
        pruned_count=len(pruned),
        total_information=sum(information(n) for n in survivors),
        avg_leaf_hcd=mean_pairwise_hcd(survivor_leaves(tree.root, pruned), metric),
    )
    new_tree = dataclasses.replace(tree, root=_copy_without(tree.root, pruned))
    return new_tree, report


def prune_sweep(tree: ContextTree, tax: Taxonomy, settings: Iterable[tuple[float, float]]) -> list[dict]:
    """Prune once per ``(theta, xi)`` setting and collect plot-ready rows."""
    metric = HybridDistance(tax, tree.lam, tree.feature_binning, tree.tag_sim_mode)
    rows = []
    for theta, xi in settings:
        _, rep = prune_tree(tree, PruneParams(theta, xi), tax, metric)
        rows.append({"theta": theta, "xi": xi, "unpruned": rep.unpruned_count, "pruned": rep.pruned_count,
                     "avg_hcd": rep.avg_leaf_hcd, "information": rep.total_information})
    return rows
