"""JSON formats for stage outputs.

* augmented / filtered points: JSON lines
  ``{"timestamp", "latlng": [lat, lng], "accuracy", "data": [ids]}``;
* summary: ``{"interactions": [{"id", "tags", "members", "times", "latlngs"}]}``
  with ``times`` a list of ``{"begin", "end"}`` and ``latlngs`` a list of
  coordinate sets;
* context tree: ``{"lambda", "tag_sim_mode", "feature_binning", "root"}``
  where every node is ``{"id", "tags", "times", "coordsets", "children",
  "leaf_element_id"}`` and ``tags`` is a list of ``[key, value]`` pairs.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable

from .augment import AugmentedPoint
from .cluster.node import ContextNode, ContextTree, FeatureBinning
from .core.types import LandUsageElement, Tag, TimeRange, TrajectoryPoint
from .errors import EmptyFile, MalformedRecord
from .ingest import coordset_to_json, read_text, parse_coordset, parse_tags, tags_to_json
from .summarise import ElementInteraction
from .timefmt import format_instant, parse_instant


def _dump(obj) -> str:
    return json.dumps(obj, indent=1, ensure_ascii=False) + "\n"


def write_augmented(points: Iterable[AugmentedPoint], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for ap in points:
            p = ap.point
            fh.write(json.dumps({
                "timestamp": format_instant(p.timestamp),
                "latlng": [p.lat, p.lng],
                "accuracy": p.accuracy,
                "data": sorted(ap.element_ids),
            }) + "\n")


def read_augmented(path) -> list[AugmentedPoint]:
    out = []
    for lineno, line in enumerate(read_text(path).splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
            lat, lng = rec["latlng"]
            p = TrajectoryPoint(parse_instant(rec["timestamp"]), float(lat), float(lng), float(rec["accuracy"]))
            out.append(AugmentedPoint(p, frozenset(str(x) for x in rec["data"])))
        except (ValueError, TypeError, KeyError) as exc:
            raise MalformedRecord(lineno, str(exc), path) from None
    return out


def _times_to_json(times: Iterable[TimeRange]) -> list[dict]:
    return [{"begin": format_instant(r.begin), "end": format_instant(r.end)} for r in times]


def _times_from_json(raw) -> tuple[TimeRange, ...]:
    return tuple(TimeRange(parse_instant(r["begin"]), parse_instant(r["end"])) for r in raw)


def summary_to_json(interactions: Iterable[ElementInteraction]) -> dict:
    out = []
    for it in interactions:
        e = it.element
        out.append({
            "id": e.id,
            "tags": tags_to_json(e.tags),
            "members": list(e.members) if e.members is not None else None,
            "times": _times_to_json(it.times),
            "latlngs": [coordset_to_json(s) for s in e.coordsets],
        })
    return {"interactions": out}


def write_summary(interactions: Iterable[ElementInteraction], path) -> None:
    Path(path).write_text(_dump(summary_to_json(interactions)), encoding="utf-8")


def read_summary(path) -> list[ElementInteraction]:
    text = read_text(path)
    if not text.strip():
        raise EmptyFile(path)
    out = []
    try:
        doc = json.loads(text)
        for i, raw in enumerate(doc["interactions"]):
            members = raw.get("members")
            e = LandUsageElement(raw["id"], parse_tags(raw["tags"]),
                                 tuple(parse_coordset(c) for c in raw["latlngs"]),
                                 tuple(members) if members is not None else None)
            out.append(ElementInteraction(e, _times_from_json(raw["times"])))
    except (ValueError, TypeError, KeyError) as exc:
        raise MalformedRecord(1, str(exc), path) from None
    return out


def node_to_json(node: ContextNode) -> dict:
    return {
        "id": node.id,
        "tags": [[t.key, t.value] for t in sorted(node.tags)],
        "times": _times_to_json(node.times),
        "coordsets": [coordset_to_json(s) for s in node.coordsets],
        "children": [node_to_json(ch) for ch in node.children],
        "leaf_element_id": node.leaf_element_id,
    }


def node_from_json(raw: dict) -> ContextNode:
    return ContextNode(
        id=int(raw["id"]),
        tags=frozenset(Tag(k, v) for k, v in raw["tags"]),
        times=_times_from_json(raw["times"]),
        coordsets=tuple(parse_coordset(c) for c in raw["coordsets"]),
        children=[node_from_json(ch) for ch in raw["children"]],
        leaf_element_id=raw.get("leaf_element_id"),
    )


def tree_to_json(tree: ContextTree) -> dict:
    b = tree.feature_binning
    return {
        "lambda": tree.lam,
        "tag_sim_mode": tree.tag_sim_mode,
        "feature_binning": {
            "time_of_day_bin": b.time_of_day_bin,
            "duration_log_base": b.duration_log_base,
            "count_log_base": b.count_log_base,
            "area_log_base": b.area_log_base,
        },
        "root": node_to_json(tree.root),
    }


def tree_from_json(doc: dict) -> ContextTree:
    return ContextTree(node_from_json(doc["root"]), float(doc["lambda"]),
                       FeatureBinning(**doc.get("feature_binning", {})), doc.get("tag_sim_mode", "combined"))


def write_tree(tree: ContextTree, path) -> None:
    Path(path).write_text(_dump(tree_to_json(tree)), encoding="utf-8")


def read_tree(path) -> ContextTree:
    text = read_text(path)
    if not text.strip():
        raise EmptyFile(path)
    try:
        return tree_from_json(json.loads(text))
    except (ValueError, TypeError, KeyError) as exc:
        raise MalformedRecord(1, str(exc), path) from None
