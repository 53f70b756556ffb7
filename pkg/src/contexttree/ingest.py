"""Readers and writers for trajectories, land-usage stores and taxonomies.

Formats:

* trajectory: CSV ``timestamp,lat,lng[,accuracy]`` (header optional) or JSON
  lines with the same keys;
* land usage: ``{"elements": [{"id", "tags", "coordsets", "members"}]}``;
* taxonomy: one ``parent child`` edge per line, ``#`` starts a comment, a
  line holding a single word declares that word.
"""
from __future__ import annotations

import csv
import json
import logging
import math
import re
from pathlib import Path
from typing import Iterable, Mapping, Optional

from .core.types import MIN_ACCURACY_M, CoordinateSet, LandUsageElement, Tag, TrajectoryPoint
from .errors import (
    CycleDetected,
    DuplicateId,
    EmptyFile,
    MalformedGeometry,
    MalformedRecord,
    MultipleRoots,
    UnknownParent,
)
from .timefmt import format_instant, parse_instant

log = logging.getLogger(__name__)

DEFAULT_ACCURACY_M = 10.0
_TOKEN_SPLIT = re.compile(r"[_\s]+")


def read_text(path) -> str:
    """Read a UTF-8 file, reporting undecodable bytes as a malformed record."""
    data = Path(path).read_bytes()
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        line = data.count(b"\n", 0, exc.start) + 1
        raise MalformedRecord(line, "invalid UTF-8", path) from None


# --------------------------------------------------------------------------
# trajectories

def _make_point(ts, lat, lng, acc, default_accuracy) -> TrajectoryPoint:
    t = parse_instant(str(ts))
    lat, lng = float(lat), float(lng)
    a = default_accuracy if acc is None or str(acc).strip() == "" else float(acc)
    if not (math.isfinite(t) and math.isfinite(lat) and math.isfinite(lng) and math.isfinite(a)):
        raise ValueError("non-finite value")
    return TrajectoryPoint(t, lat, lng, max(a, MIN_ACCURACY_M))


def _is_header(row: list[str]) -> bool:
    try:
        float(row[1])
        return False
    except (ValueError, IndexError):
        return True


def _read_csv_points(text: str, path, default_accuracy):
    columns = None
    points = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        try:
            row = next(csv.reader([line]), [])
        except csv.Error as exc:
            raise MalformedRecord(lineno, str(exc), path) from None
        if not row or all(not c.strip() for c in row):
            continue
        row = [c.strip() for c in row]
        if columns is None and not points and _is_header(row):
            columns = {name.lower(): i for i, name in enumerate(row)}
            if "lon" in columns and "lng" not in columns:
                columns["lng"] = columns["lon"]
            if not {"timestamp", "lat", "lng"} <= columns.keys():
                raise MalformedRecord(lineno, "header needs timestamp, lat and lng columns", path)
            continue
        try:
            if columns:
                acc_i = columns.get("accuracy")
                acc = row[acc_i] if acc_i is not None and acc_i < len(row) else None
                p = _make_point(row[columns["timestamp"]], row[columns["lat"]], row[columns["lng"]],
                                acc, default_accuracy)
            else:
                if len(row) not in (3, 4):
                    raise ValueError("expected 3 or 4 fields")
                p = _make_point(row[0], row[1], row[2], row[3] if len(row) == 4 else None, default_accuracy)
        except (ValueError, IndexError, KeyError) as exc:
            raise MalformedRecord(lineno, str(exc), path) from None
        points.append(p)
    return points


def _read_jsonl_points(text: str, path, default_accuracy):
    points = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
            if "latlng" in rec:
                lat, lng = rec["latlng"]
            else:
                lat, lng = rec["lat"], rec["lng"]
            points.append(_make_point(rec["timestamp"], lat, lng, rec.get("accuracy"), default_accuracy))
        except (ValueError, TypeError, KeyError, AttributeError) as exc:
            raise MalformedRecord(lineno, str(exc), path) from None
    return points


def parse_trajectory(path, default_accuracy: float = DEFAULT_ACCURACY_M) -> list[TrajectoryPoint]:
    """Read a trajectory file, returning points stably sorted by timestamp.

    Accuracies below 1 m are raised to 1 m; a missing accuracy takes
    ``default_accuracy``.
    """
    path = Path(path)
    text = read_text(path)
    stripped = text.lstrip()
    if stripped.startswith("{") or path.suffix in (".jsonl", ".ndjson"):
        points = _read_jsonl_points(text, path, default_accuracy)
    else:
        points = _read_csv_points(text, path, default_accuracy)
    if not points:
        raise EmptyFile(path)
    points.sort(key=lambda p: p.timestamp)
    return points


def write_trajectory(points: Iterable[TrajectoryPoint], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["timestamp", "lat", "lng", "accuracy"])
        for p in points:
            w.writerow([format_instant(p.timestamp), repr(p.lat), repr(p.lng), repr(p.accuracy)])


# --------------------------------------------------------------------------
# land usage

class ElementStore:
    """Land-usage elements keyed by id."""

    def __init__(self, elements: Iterable[LandUsageElement] = ()):
        self.elements: dict[str, LandUsageElement] = {}
        for e in elements:
            if e.id in self.elements:
                raise DuplicateId(e.id)
            self.elements[e.id] = e
        self.dangling = sorted({
            (e.id, m) for e in self.elements.values() for m in (e.members or ()) if m not in self.elements
        })

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements.values())

    def __getitem__(self, element_id: str) -> LandUsageElement:
        return self.elements[element_id]

    def __contains__(self, element_id) -> bool:
        return element_id in self.elements

    def __eq__(self, other):
        return isinstance(other, ElementStore) and self.elements == other.elements


def parse_tags(raw) -> frozenset[Tag]:
    if isinstance(raw, Mapping):
        pairs = raw.items()
    elif isinstance(raw, list):
        pairs = [tuple(p) for p in raw]
    else:
        raise TypeError("tags must be a mapping or a list of [key, value] pairs")
    out = []
    for k, v in pairs:
        out.append(Tag(str(k), "" if v is None else str(v)))
    return frozenset(out)


def tags_to_json(tags: Iterable[Tag]):
    ordered = sorted(tags)
    keys = [t.key for t in ordered]
    if len(set(keys)) == len(keys):
        return {t.key: t.value for t in ordered}
    return [[t.key, t.value] for t in ordered]


def parse_coordset(raw) -> CoordinateSet:
    pts = []
    for p in raw["points"]:
        lat, lng = float(p[0]), float(p[1])
        if not (-90 <= lat <= 90 and -180 <= lng <= 180):
            raise ValueError(f"coordinate out of range: {lat}, {lng}")
        pts.append((lat, lng))
    return CoordinateSet(tuple(pts), closed=bool(raw.get("closed", False)))


def coordset_to_json(s: CoordinateSet) -> dict:
    return {"closed": s.closed, "points": [[lat, lng] for lat, lng in s.points]}


def element_from_json(raw: dict, index: int = 0) -> LandUsageElement:
    if not isinstance(raw, dict) or not isinstance(raw.get("id"), str) or not raw["id"]:
        raise MalformedRecord(index + 1, "element needs a string id")
    eid = raw["id"]
    try:
        tags = parse_tags(raw.get("tags", {}))
    except (TypeError, ValueError) as exc:
        raise MalformedRecord(index + 1, f"{eid}: {exc}") from None
    try:
        coordsets = tuple(parse_coordset(c) for c in raw["coordsets"])
        if not coordsets:
            raise ValueError("no coordinate sets")
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise MalformedGeometry(eid, str(exc)) from None
    members = raw.get("members")
    if members is not None:
        members = tuple(str(m) for m in members)
    return LandUsageElement(eid, tags, coordsets, members)


def element_to_json(e: LandUsageElement) -> dict:
    out = {"id": e.id, "tags": tags_to_json(e.tags), "coordsets": [coordset_to_json(c) for c in e.coordsets]}
    if e.members is not None:
        out["members"] = list(e.members)
    return out


def parse_land_usage(path) -> ElementStore:
    path = Path(path)
    text = read_text(path)
    if not text.strip():
        raise EmptyFile(path)
    try:
        doc = json.loads(text)
        raw_elements = doc["elements"]
        if not isinstance(raw_elements, list):
            raise TypeError("'elements' must be a list")
    except (ValueError, KeyError, TypeError) as exc:
        raise MalformedRecord(1, str(exc), path) from None
    store = ElementStore(element_from_json(raw, i) for i, raw in enumerate(raw_elements))
    for eid, member in store.dangling:
        log.warning("element %s references missing member %s", eid, member)
    return store


def write_land_usage(store: ElementStore, path) -> None:
    doc = {"elements": [element_to_json(e) for e in store]}
    Path(path).write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")


# --------------------------------------------------------------------------
# taxonomy

class Taxonomy:
    """A rooted word hierarchy; the root has depth 1."""

    def __init__(self, parents: Mapping[str, Optional[str]]):
        self.parent: dict[str, Optional[str]] = {w.lower(): (p.lower() if p else None) for w, p in parents.items()}
        for word, parent in self.parent.items():
            if parent is not None and parent not in self.parent:
                raise UnknownParent(word, parent)
        self.depth: dict[str, int] = {}
        for word in self.parent:
            self._resolve_depth(word)
        roots = [w for w, p in self.parent.items() if p is None]
        if len(roots) > 1:
            raise MultipleRoots(roots)
        self.root = roots[0] if roots else None

    def _resolve_depth(self, word: str) -> int:
        path = []
        seen = set()
        w = word
        while w is not None and w not in self.depth:
            if w in seen:
                raise CycleDetected(seen)
            seen.add(w)
            path.append(w)
            w = self.parent[w]
        d = 0 if w is None else self.depth[w]
        for node in reversed(path):
            d += 1
            self.depth[node] = d
        return self.depth[word]

    def __contains__(self, word) -> bool:
        return word in self.parent

    def __len__(self):
        return len(self.parent)

    def __eq__(self, other):
        return isinstance(other, Taxonomy) and self.parent == other.parent

    def ancestors(self, word: str) -> list[str]:
        """``word`` followed by its ancestors up to the root."""
        out = []
        w = word
        while w is not None:
            out.append(w)
            w = self.parent[w]
        return out

    def lcs(self, a: str, b: str) -> str:
        """Deepest common ancestor of two words."""
        seen = set(self.ancestors(a))
        for w in self.ancestors(b):
            if w in seen:
                return w
        raise ValueError(f"{a!r} and {b!r} share no ancestor")


def parse_taxonomy(path) -> Taxonomy:
    path = Path(path)
    parents: dict[str, Optional[str]] = {}
    for lineno, line in enumerate(read_text(path).splitlines(), start=1):
        tokens = line.split("#", 1)[0].split()
        if not tokens:
            continue
        tokens = [t.lower() for t in tokens]
        if len(tokens) == 1:
            parents.setdefault(tokens[0], None)
        elif len(tokens) == 2:
            parent, child = tokens
            if parent == child:
                raise CycleDetected({child})
            if parents.get(child) not in (None, parent):
                raise MalformedRecord(lineno, f"{child!r} already has parent {parents[child]!r}", path)
            parents[child] = parent
            parents.setdefault(parent, None)
        else:
            raise MalformedRecord(lineno, "expected 'parent child'", path)
    if not parents:
        raise EmptyFile(path)
    return Taxonomy(parents)


def write_taxonomy(tax: Taxonomy, path) -> None:
    lines = []
    if tax.root is not None and all(p != tax.root for p in tax.parent.values()):
        lines.append(tax.root)
    edges = sorted((tax.depth[w], p, w) for w, p in tax.parent.items() if p is not None)
    lines.extend(f"{p} {w}" for _, p, w in edges)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def tokens(text: str) -> list[str]:
    """Split a tag key or value into lower-case tokens on ``_`` and whitespace."""
    parts = [t for t in _TOKEN_SPLIT.split(text.lower()) if t]
    return parts or [text.lower()]
