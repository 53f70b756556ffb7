"""Context trees: multi-scale summaries of the places a GPS trajectory touches."""
from .analysis import coverage, coverage_by_day, export_dot, tree_stats
from .augment import AugmentedPoint, augment_trajectory, build_index
from .cluster import ContextNode, ContextTree, FeatureBinning, HybridDistance, build_context_tree
from .filtering import FilterParams, filter_trajectory
from .ingest import ElementStore, Taxonomy, parse_land_usage, parse_taxonomy, parse_trajectory
from .pipeline import PipelineConfig, run_pipeline
from .prune import PruneParams, prune_sweep, prune_tree
from .summarise import ElementInteraction, summarise

__version__ = "0.1.0"

__all__ = [
    "AugmentedPoint", "ContextNode", "ContextTree", "ElementInteraction", "ElementStore",
    "FeatureBinning", "FilterParams", "HybridDistance", "PipelineConfig", "PruneParams", "Taxonomy",
    "augment_trajectory", "build_context_tree", "build_index", "coverage", "coverage_by_day",
    "export_dot", "filter_trajectory", "parse_land_usage", "parse_taxonomy", "parse_trajectory",
    "prune_sweep", "prune_tree", "run_pipeline", "summarise", "tree_stats",
]
