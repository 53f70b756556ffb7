"""End-to-end run: augment, filter, summarise, cluster and prune."""
from __future__ import annotations

import csv
import dataclasses
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .augment import build_index, augment_trajectory
from .cluster import ContextTree, FeatureBinning, HybridDistance, build_context_tree
from .filtering import DEFAULT_DELTA, DEFAULT_T, FilterParams, filter_trajectory
from .formats import write_augmented, write_summary, write_tree
from .analysis import export_dot
from .ingest import DEFAULT_ACCURACY_M, read_text, parse_land_usage, parse_taxonomy, parse_trajectory
from .errors import NoInteractions
from .prune import DEFAULT_THETA, DEFAULT_XI, PruneParams, PruneReport, prune_tree
from .summarise import DEFAULT_T_MAX, summarise

log = logging.getLogger(__name__)

TAG_SIM_MODES = ("keys", "values", "combined")
REPORT_COLUMNS = ("theta", "xi", "unpruned", "pruned", "avg_hcd", "information")


@dataclass
class PipelineConfig:
    trajectory: Optional[str] = None
    land_usage: Optional[str] = None
    taxonomy: Optional[str] = None
    out_dir: Optional[str] = None
    delta: float = DEFAULT_DELTA
    t: float = DEFAULT_T
    t_max: float = DEFAULT_T_MAX
    lam: float = 0.5
    theta: float = DEFAULT_THETA
    xi: float = DEFAULT_XI
    tag_sim_mode: str = "combined"
    feature_binning: FeatureBinning = field(default_factory=FeatureBinning)
    default_accuracy: float = DEFAULT_ACCURACY_M
    edge_windows: bool = False
    prune: bool = True

    def __post_init__(self):
        if isinstance(self.feature_binning, dict):
            self.feature_binning = FeatureBinning(**self.feature_binning)
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"lambda must lie in [0, 1], got {self.lam}")
        if self.tag_sim_mode not in TAG_SIM_MODES:
            raise ValueError(f"tag_sim_mode must be one of {TAG_SIM_MODES}, got {self.tag_sim_mode!r}")
        if self.t_max < 0:
            raise ValueError(f"t_max must be non-negative, got {self.t_max}")
        # delegate the remaining range checks to the stage parameter types
        FilterParams(self.delta, self.t)
        PruneParams(self.theta, self.xi)

    @classmethod
    def from_dict(cls, raw: dict) -> "PipelineConfig":
        if not isinstance(raw, dict):
            raise ValueError("config must be a JSON object")
        raw = dict(raw)
        if "lambda" in raw:
            raw["lam"] = raw.pop("lambda")
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(raw) - known)
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(unknown)}")
        try:
            return cls(**raw)
        except TypeError as exc:
            raise ValueError(f"bad config value: {exc}") from None

    @classmethod
    def from_file(cls, path) -> "PipelineConfig":
        return cls.from_dict(json.loads(read_text(path)))

    def with_overrides(self, **overrides) -> "PipelineConfig":
        """Copy with every non-None override applied."""
        return dataclasses.replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["lambda"] = d.pop("lam")
        return d


@dataclass
class PipelineResult:
    tree: ContextTree
    pruned: Optional[ContextTree] = None
    report: Optional[PruneReport] = None
    leaf_count: int = 0
    outputs: dict = field(default_factory=dict)


def write_report(report: PruneReport, params: PruneParams, json_path=None, csv_path=None) -> None:
    row = {"theta": params.theta, "xi": params.xi, "unpruned": report.unpruned_count,
           "pruned": report.pruned_count, "avg_hcd": report.avg_leaf_hcd,
           "information": report.total_information}
    if json_path is not None:
        Path(json_path).write_text(json.dumps(row, indent=1) + "\n", encoding="utf-8")
    if csv_path is not None:
        write_rows_csv([row], csv_path)


def write_rows_csv(rows, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=REPORT_COLUMNS, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})


def run_pipeline(config: PipelineConfig) -> PipelineResult:
    """Run every stage in order, dumping intermediates when ``out_dir`` is set."""
    for name in ("trajectory", "land_usage", "taxonomy"):
        if getattr(config, name) is None:
            raise ValueError(f"config is missing the {name} path")
    points = parse_trajectory(config.trajectory, config.default_accuracy)
    store = parse_land_usage(config.land_usage)
    tax = parse_taxonomy(config.taxonomy)

    out = Path(config.out_dir) if config.out_dir else None
    outputs: dict[str, Path] = {}
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)

    def dump(name, writer, obj):
        if out is not None:
            outputs[name] = out / name
            writer(obj, outputs[name])

    augmented = augment_trajectory(points, build_index(store), store)
    dump("augmented.jsonl", write_augmented, augmented)
    filtered = filter_trajectory(augmented, FilterParams(config.delta, config.t), config.edge_windows)
    dump("filtered.jsonl", write_augmented, filtered)
    interactions = summarise(filtered, store, config.t_max)
    dump("summary.json", write_summary, interactions)
    log.info("%d points, %d interactions", len(points), len(interactions))
    if not interactions:
        raise NoInteractions()

    metric = HybridDistance(tax, config.lam, config.feature_binning, config.tag_sim_mode)
    tree = build_context_tree(interactions, config.lam, tax, config.feature_binning,
                              config.tag_sim_mode, metric)
    dump("tree.json", write_tree, tree)
    dump("tree.dot", export_dot, tree)
    result = PipelineResult(tree, leaf_count=len(interactions), outputs=outputs)

    if config.prune:
        params = PruneParams(config.theta, config.xi)
        result.pruned, result.report = prune_tree(tree, params, tax, metric)
        dump("pruned_tree.json", write_tree, result.pruned)
        dump("pruned_tree.dot", export_dot, result.pruned)
        if out is not None:
            outputs["prune_report.json"] = out / "prune_report.json"
            outputs["prune_report.csv"] = out / "prune_report.csv"
            write_report(result.report, params, outputs["prune_report.json"], outputs["prune_report.csv"])
    return result
