from .build import build_context_tree, closest_groups
from .node import ContextNode, ContextTree, FeatureBinning, leaf_node, merge_clusters, merge_coordsets
from .similarity import (
    HybridDistance,
    feature_similarity,
    feature_strings,
    geographical_distance,
    hcd,
    semantic_similarity,
    tag_sim,
    wup_similarity,
)

__all__ = [
    "ContextNode", "ContextTree", "FeatureBinning", "HybridDistance", "build_context_tree",
    "closest_groups", "feature_similarity", "feature_strings", "geographical_distance", "hcd",
    "leaf_node", "merge_clusters", "merge_coordsets", "semantic_similarity", "tag_sim",
    "wup_similarity",
]
