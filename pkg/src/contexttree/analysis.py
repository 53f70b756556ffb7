"""Tree statistics, day-by-day coverage and DOT export."""
from __future__ import annotations

import math
from collections import Counter
from pathlib import Path
from typing import Iterable, Sequence

from .augment import AugmentedPoint
from .cluster.node import ContextNode, ContextTree
from .errors import EmptyTestDay

SECONDS_PER_DAY = 86400


def coverage(train: Iterable[str], test: Iterable[str]) -> float:
    """Percentage of the unique test ids that also occur in ``train``."""
    test = set(test)
    if not test:
        raise EmptyTestDay(None)
    return 100.0 * len(test & set(train)) / len(test)


def ids_by_day(points: Sequence[AugmentedPoint]) -> dict[int, set[str]]:
    """Element ids per UTC calendar day, numbered from the first day present."""
    days: dict[int, set[str]] = {}
    if not points:
        return days
    first = min(math.floor(ap.point.timestamp / SECONDS_PER_DAY) for ap in points)
    for ap in points:
        d = math.floor(ap.point.timestamp / SECONDS_PER_DAY) - first
        days.setdefault(d, set()).update(ap.element_ids)
    return days


def coverage_by_day(points: Sequence[AugmentedPoint]) -> list[dict]:
    """Fixed (day 0 only) and retrained (days 0..n-1) coverage for each day n >= 1.

    Days without any element are skipped; they neither test nor train.
    """
    days = ids_by_day(points)
    rows = []
    seen: set[str] = set(days.get(0, ()))
    for n in range(1, max(days, default=0) + 1):
        test = days.get(n)
        if not test:
            continue
        rows.append({"day": n, "fixed": coverage(days.get(0, ()), test), "retrained": coverage(seen, test)})
        seen |= test
    return rows


def tree_stats(tree_or_node) -> dict:
    root = tree_or_node.root if isinstance(tree_or_node, ContextTree) else tree_or_node
    total = leaves = periods = 0
    for node in root.walk():
        total += 1
        if node.is_leaf:
            leaves += 1
            periods += len(node.times)
    return {"total_nodes": total, "leaf_nodes": leaves, "time_periods": periods}


def node_label(node: ContextNode, top: int = 2) -> str:
    """The ``top`` tags whose keys occur most often in the node (ties by key, value)."""
    freq = Counter(t.key for t in node.tags)
    ranked = sorted(node.tags, key=lambda t: (-freq[t.key], t.key, t.value))
    return "\n".join(str(t) for t in ranked[:top]) or f"#{node.id}"


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def tree_to_dot(tree: ContextTree) -> str:
    lines = ["digraph context_tree {", "  node [shape=box];"]
    edges = []
    for node in tree.root.walk():
        label = node_label(node)
        if node.leaf_element_id:
            label = f"{node.leaf_element_id}\n{label}"
        lines.append(f"  n{node.id} [label={_quote(label)}];")
        edges.extend(f"  n{node.id} -> n{ch.id};" for ch in node.children)
    lines.extend(edges)
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_dot(tree: ContextTree, path) -> None:
    Path(path).write_text(tree_to_dot(tree), encoding="utf-8")
