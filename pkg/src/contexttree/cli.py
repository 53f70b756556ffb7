"""Command line front end.

Every stage reads and writes the documented JSON formats, so running the
stage subcommands one after another gives the same files as ``pipeline``.
Exit status is 0 on success, 1 for usage errors and 2 for bad input data.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from itertools import product
from pathlib import Path

from . import __version__
from .analysis import coverage_by_day, export_dot, tree_stats
from .augment import augment_trajectory, build_index
from .cluster import FeatureBinning, build_context_tree
from .errors import DataError, NoInteractions
from .filtering import DEFAULT_DELTA, DEFAULT_T, FilterParams, filter_trajectory
from .formats import read_augmented, read_summary, read_tree, write_augmented, write_summary, write_tree
from .ingest import DEFAULT_ACCURACY_M, parse_land_usage, parse_taxonomy, parse_trajectory
from .pipeline import TAG_SIM_MODES, PipelineConfig, run_pipeline, write_report, write_rows_csv
from .prune import DEFAULT_THETA, DEFAULT_XI, PruneParams, prune_sweep, prune_tree
from .summarise import DEFAULT_T_MAX, summarise
from .synth import SynthSpec, write_synth

log = logging.getLogger("contexttree")

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated numbers, got {text!r}") from None


def _print_json(obj, path=None):
    text = json.dumps(obj, indent=1) + "\n"
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_augment(args):
    points = parse_trajectory(args.trajectory, args.default_accuracy)
    store = parse_land_usage(args.land_usage)
    write_augmented(augment_trajectory(points, build_index(store), store), args.output)


def cmd_filter(args):
    aug = read_augmented(args.input)
    write_augmented(filter_trajectory(aug, FilterParams(args.delta, args.t), args.edge_windows), args.output)


def cmd_summarise(args):
    filtered = read_augmented(args.input)
    store = parse_land_usage(args.land_usage)
    write_summary(summarise(filtered, store, args.t_max), args.output)


def cmd_cluster(args):
    interactions = read_summary(args.input)
    if not interactions:
        raise NoInteractions()
    tax = parse_taxonomy(args.taxonomy)
    tree = build_context_tree(interactions, args.lam, tax, FeatureBinning(), args.tag_sim_mode)
    write_tree(tree, args.output)
    if args.dot:
        export_dot(tree, args.dot)


def cmd_prune(args):
    tree = read_tree(args.input)
    tax = parse_taxonomy(args.taxonomy)
    params = PruneParams(args.theta, args.xi)
    pruned, report = prune_tree(tree, params, tax)
    if args.output:
        write_tree(pruned, args.output)
    if args.dot:
        export_dot(pruned, args.dot)
    write_report(report, params, args.report_json, args.report_csv)
    if args.sweep_csv:
        thetas = args.thetas if args.thetas is not None else [round(0.1 * i, 1) for i in range(11)]
        xis = args.xis if args.xis is not None else [args.xi]
        write_rows_csv(prune_sweep(tree, tax, product(thetas, xis)), args.sweep_csv)
    if not (args.output or args.report_json or args.report_csv):
        _print_json(report.as_dict())


def cmd_pipeline(args):
    config = PipelineConfig.from_file(args.config) if args.config else PipelineConfig()
    config = config.with_overrides(
        trajectory=args.trajectory, land_usage=args.land_usage, taxonomy=args.taxonomy,
        out_dir=args.out_dir, delta=args.delta, t=args.t, t_max=args.t_max, lam=args.lam,
        theta=args.theta, xi=args.xi, tag_sim_mode=args.tag_sim_mode,
        default_accuracy=args.default_accuracy, edge_windows=args.edge_windows or None,
        prune=False if args.no_prune else None,
    )
    if config.out_dir is None:
        raise UsageError("pipeline needs --out-dir (or out_dir in the config file)")
    result = run_pipeline(config)
    summary = {"leaves": result.leaf_count, **tree_stats(result.tree)}
    if result.report is not None:
        summary["prune"] = result.report.as_dict()
    _print_json(summary)


def cmd_stats(args):
    _print_json(tree_stats(read_tree(args.input)), args.output)


def cmd_coverage(args):
    rows = coverage_by_day(read_augmented(args.input))
    out = open(args.output, "w", encoding="utf-8") if args.output else sys.stdout
    try:
        out.write("day,fixed,retrained\n")
        for r in rows:
            out.write(f"{r['day']},{r['fixed']!r},{r['retrained']!r}\n")
    finally:
        if out is not sys.stdout:
            out.close()


def cmd_synth(args):
    spec = SynthSpec(grid=args.grid, days=args.days, interval_s=args.interval)
    paths = write_synth(args.seed, args.out_dir, spec)
    _print_json({k: str(v) for k, v in paths.items()})


def cmd_export_dot(args):
    export_dot(read_tree(args.input), args.output)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="contexttree", description="Build context trees from GPS trajectories and land usage data.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("augment", help="attach candidate element ids to each trajectory point")
    s.add_argument("--trajectory", required=True)
    s.add_argument("--land-usage", required=True)
    s.add_argument("--default-accuracy", type=float, default=DEFAULT_ACCURACY_M)
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_augment)

    s = sub.add_parser("filter", help="keep elements that dominate the temporal buffer")
    s.add_argument("-i", "--input", required=True, help="augmented JSONL")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--delta", type=float, default=DEFAULT_DELTA, help="buffer half-width in seconds")
    s.add_argument("--t", type=float, default=DEFAULT_T, help="normalised score threshold")
    s.add_argument("--edge-windows", action="store_true",
                   help="also filter points too close to either end for a full buffer")
    s.set_defaults(func=cmd_filter)

    s = sub.add_parser("summarise", help="group filtered points into per-element interaction periods")
    s.add_argument("-i", "--input", required=True, help="filtered JSONL")
    s.add_argument("--land-usage", required=True)
    s.add_argument("--t-max", type=float, default=DEFAULT_T_MAX, help="largest gap inside one period (s)")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_summarise)

    s = sub.add_parser("cluster", help="build the context tree from a summary")
    s.add_argument("-i", "--input", required=True, help="summary JSON")
    s.add_argument("--taxonomy", required=True)
    s.add_argument("--lambda", dest="lam", type=float, default=0.5, help="semantic weight in [0, 1]")
    s.add_argument("--tag-sim-mode", choices=TAG_SIM_MODES, default="combined")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--dot", help="also write the tree as DOT")
    s.set_defaults(func=cmd_cluster)

    s = sub.add_parser("prune", help="drop low cost-benefit nodes and report")
    s.add_argument("-i", "--input", required=True, help="tree JSON")
    s.add_argument("--taxonomy", required=True)
    s.add_argument("--theta", type=float, default=DEFAULT_THETA)
    s.add_argument("--xi", type=float, default=DEFAULT_XI)
    s.add_argument("-o", "--output", help="pruned tree JSON")
    s.add_argument("--dot", help="pruned tree as DOT")
    s.add_argument("--report-json")
    s.add_argument("--report-csv")
    s.add_argument("--sweep-csv", help="write one report row per (theta, xi) combination")
    s.add_argument("--thetas", type=_floats, help="sweep thetas, default 0,0.1,...,1")
    s.add_argument("--xis", type=_floats, help="sweep xis, default --xi")
    s.set_defaults(func=cmd_prune)

    s = sub.add_parser("pipeline", help="run every stage and dump all intermediates")
    s.add_argument("--config", help="JSON file with PipelineConfig fields; flags override it")
    s.add_argument("--trajectory")
    s.add_argument("--land-usage")
    s.add_argument("--taxonomy")
    s.add_argument("--out-dir")
    s.add_argument("--delta", type=float)
    s.add_argument("--t", type=float)
    s.add_argument("--t-max", type=float)
    s.add_argument("--lambda", dest="lam", type=float)
    s.add_argument("--theta", type=float)
    s.add_argument("--xi", type=float)
    s.add_argument("--tag-sim-mode", choices=TAG_SIM_MODES)
    s.add_argument("--default-accuracy", type=float)
    s.add_argument("--edge-windows", action="store_true")
    s.add_argument("--no-prune", action="store_true")
    s.set_defaults(func=cmd_pipeline)

    s = sub.add_parser("stats", help="node, leaf and time period counts of a tree")
    s.add_argument("-i", "--input", required=True)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_stats)

    s = sub.add_parser("coverage", help="per-day share of elements already seen, as CSV")
    s.add_argument("-i", "--input", required=True, help="augmented or filtered JSONL")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_coverage)

    s = sub.add_parser("synth", help="write a synthetic city, routine trajectory and taxonomy")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out-dir", required=True)
    s.add_argument("--days", type=int, default=1)
    s.add_argument("--interval", type=float, default=60.0, help="sampling interval in seconds")
    s.add_argument("--grid", type=int, default=SynthSpec.grid, help="blocks per side")
    s.set_defaults(func=cmd_synth)

    s = sub.add_parser("export-dot", help="render a tree JSON as Graphviz DOT")
    s.add_argument("-i", "--input", required=True)
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_export_dot)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except (DataError, json.JSONDecodeError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"contexttree: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (UsageError, ValueError) as exc:
        print(f"contexttree: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
