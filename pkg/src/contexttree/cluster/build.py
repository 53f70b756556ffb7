"""Greedy agglomerative construction of the context tree."""
from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from ..ingest import Taxonomy
from .node import ContextNode, ContextTree, FeatureBinning, leaf_node, merge_clusters
from .similarity import HybridDistance

TIE_EPS = 1e-9


def closest_groups(dist: np.ndarray, eps: float = TIE_EPS) -> list[list[int]]:
    """Group the indices joined by minimum-distance pairs.

    ``dist`` is a square matrix; only the strict upper triangle is read and
    ``inf`` marks unavailable pairs. Every pair within ``eps`` of the global
    minimum is an edge, and groups are the connected components of those
    edges. Groups come out ordered by their smallest index.
    """
    n = dist.shape[0]
    upper = np.triu(dist, k=1)
    upper[np.tril_indices(n)] = np.inf
    best = upper.min()
    if not np.isfinite(best):
        return []
    rows, cols = np.nonzero(upper <= best + eps)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in zip(rows.tolist(), cols.tolist()):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    groups: dict[int, list[int]] = {}
    for i in sorted(set(rows.tolist()) | set(cols.tolist())):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: g[0])


def build_context_tree(leaves: Sequence, lam: float, tax: Taxonomy,
                       binning: FeatureBinning = FeatureBinning(), mode: str = "combined",
                       metric: Optional[HybridDistance] = None) -> ContextTree:
    """Cluster element interactions into a context tree.

    Leaves get ids ``0..n-1`` in input order; each merged node takes the next
    free id. Every round merges all groups tied at the current minimum
    distance, in order of their smallest member id.
    """
    if not leaves:
        raise ValueError("cannot build a context tree without leaves")
    metric = metric or HybridDistance(tax, lam, binning, mode)
    clusters: list[ContextNode] = [leaf_node(i, x) for i, x in enumerate(leaves)]
    next_id = len(clusters)

    # distances between live clusters, indexed by position in `clusters`
    dist = np.full((len(clusters), len(clusters)), np.inf)
    for i in range(len(clusters)):
        for j in range(i + 1, len(clusters)):
            dist[i, j] = metric(clusters[i], clusters[j])

    while len(clusters) > 1:
        groups = closest_groups(dist)
        merged_positions = {i for g in groups for i in g}
        new_nodes = []
        for g in sorted(groups, key=lambda g: min(clusters[i].id for i in g)):
            members = sorted((clusters[i] for i in g), key=lambda c: c.id)
            new_nodes.append(merge_clusters(members, next_id))
            next_id += 1
        keep = [i for i in range(len(clusters)) if i not in merged_positions]
        survivors = [clusters[i] for i in keep]
        clusters = survivors + new_nodes

        n = len(clusters)
        nd = np.full((n, n), np.inf)
        k = len(keep)
        if k:
            nd[:k, :k] = dist[np.ix_(keep, keep)]
        for j in range(k, n):
            for i in range(j):
                nd[i, j] = metric(clusters[i], clusters[j])
        dist = nd
    return ContextTree(clusters[0], lam, binning, mode)
