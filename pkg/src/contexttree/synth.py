"""Deterministic synthetic city, daily routine trajectory and taxonomy.

The city is a square grid of blocks separated by roads. Blocks are
residential, office, retail, university or park, each filled with plausibly
tagged elements. The routine walks from home to a cafe, the office, a meeting elsewhere,
lunch, a short errand, an evening venue and back home. Venues are drawn each
day from small fixed pools, so a repeating routine saturates quickly.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .augment import build_index
from .core.geometry import METRES_PER_DEGREE, circle_bbox, circle_intersects_element
from .core.types import CoordinateSet, LandUsageElement, Tag, TrajectoryPoint
from .ingest import ElementStore, Taxonomy, write_land_usage, write_taxonomy, write_trajectory
from .timefmt import format_instant, parse_instant

ORIGIN = (52.3800, -1.5600)
WALK_SPEED = 1.4  # m/s

TAXONOMY_EDGES = """
entity object
entity place
object structure
structure building
building house
building office
building commercial
building retail
building university
building levels
structure highway
highway road
road primary
road secondary
road residential
highway path
path footway
path cycleway
highway stop
stop bus
place area
area landuse
landuse grass
area leisure
leisure park
leisure garden
object amenity
amenity eatery
eatery cafe
eatery restaurant
eatery pub
amenity shop
shop supermarket
shop bakery
amenity furniture
furniture bench
furniture post
furniture box
"""


@dataclass(frozen=True)
class SynthSpec:
    grid: int = 6
    block_m: float = 160.0
    days: int = 1
    interval_s: float = 60.0
    start: str = "2013-11-08T00:00:00Z"
    stay_accuracy: tuple[float, float] = (20.0, 70.0)
    move_accuracy: tuple[float, float] = (8.0, 30.0)


@dataclass
class SynthData:
    points: list[TrajectoryPoint]
    store: ElementStore
    taxonomy: Taxonomy
    visits: list[dict]
    encountered: set[str]


def synth_taxonomy() -> Taxonomy:
    parents = {}
    for line in TAXONOMY_EDGES.strip().splitlines():
        parent, child = line.split()
        parents.setdefault(parent, None)
        parents[child] = parent
    return Taxonomy(parents)


class _City:
    def __init__(self, spec: SynthSpec, rng: np.random.Generator):
        self.spec = spec
        self.rng = rng
        self.kx = METRES_PER_DEGREE * math.cos(math.radians(ORIGIN[0]))
        self.elements: list[LandUsageElement] = []
        self.centres: dict[str, tuple[float, float]] = {}
        self._next = 1000
        self.homes, self.offices, self.eateries, self.evening, self.errands = [], [], [], [], []
        self._build()

    def latlng(self, x, y):
        return (round(ORIGIN[0] + y / METRES_PER_DEGREE, 7), round(ORIGIN[1] + x / self.kx, 7))

    def _add(self, prefix, tags, coordsets, centre):
        eid = f"{prefix}_{self._next}"
        self._next += 1
        self.elements.append(LandUsageElement(eid, frozenset(Tag(k, v) for k, v in tags.items()), coordsets))
        self.centres[eid] = centre
        return eid

    def _rect(self, x0, y0, x1, y1):
        pts = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
        return CoordinateSet(tuple(self.latlng(x, y) for x, y in pts), closed=True)

    def _building(self, cx, cy, w, h, tags):
        return self._add("w", tags, (self._rect(cx - w / 2, cy - h / 2, cx + w / 2, cy + h / 2),), (cx, cy))

    def _build(self):
        g, b = self.spec.grid, self.spec.block_m
        rng = self.rng
        n = g * g
        kinds = (["park"] * max(1, n // 9) + ["university"] * max(1, n // 12) + ["office"] * max(1, n // 5)
                 + ["retail"] * max(1, n // 5))
        kinds += ["residential"] * (n - len(kinds))
        kinds = [kinds[i] for i in rng.permutation(len(kinds))]

        for line in range(g + 1):
            primary = line == g // 2
            for seg in range(g):
                for horizontal in (True, False):
                    a = (seg * b, line * b) if horizontal else (line * b, seg * b)
                    z = ((seg + 1) * b, line * b) if horizontal else (line * b, (seg + 1) * b)
                    tags = {"highway": "primary" if primary else "residential"}
                    if primary:
                        tags["sidewalk"] = "both"
                    cs = CoordinateSet((self.latlng(*a), self.latlng(*z)), closed=False)
                    self._add("w", tags, (cs,), ((a[0] + z[0]) / 2, (a[1] + z[1]) / 2))
                    if primary and seg % 2 == 0:
                        mx, my = (a[0] + z[0]) / 2, (a[1] + z[1]) / 2
                        pt = (mx + 6, my) if not horizontal else (mx, my + 6)
                        self.errands.append(self._add("n", {"highway": "bus_stop"},
                                                      (CoordinateSet((self.latlng(*pt),)),), pt))

        eatery_kinds = ["cafe", "restaurant", "pub", "bakery"]
        for idx, kind in enumerate(kinds):
            i, j = divmod(idx, g)
            x0, y0 = i * b, j * b
            cx, cy = x0 + b / 2, y0 + b / 2
            inset = 2.0
            area = self._rect(x0 + inset, y0 + inset, x0 + b - inset, y0 + b - inset)
            q = b / 4
            if kind == "residential":
                self._add("w", {"landuse": "residential"}, (area,), (cx, cy))
                for dx in (-q, q):
                    for dy in (-q, q):
                        h = self._building(cx + dx, cy + dy, 24, 20, {"building": "house", "building_levels": "2"})
                        self.homes.append(h)
                        gx, gy = cx + dx, cy + dy + (14 if dy > 0 else -14)
                        self._add("w", {"leisure": "garden"}, (self._rect(gx - 10, gy - 4, gx + 10, gy + 4),), (gx, gy))
            elif kind == "office":
                self._add("w", {"landuse": "commercial"}, (area,), (cx, cy))
                for dx in (-q, q):
                    o = self._building(cx + dx, cy, 70, 60,
                                       {"building": "office", "building_levels": str(int(rng.integers(3, 7)))})
                    self.offices.append(o)
                self._add("w", {"amenity": "parking", "surface": "asphalt"},
                          (self._rect(cx - 30, y0 + 8, cx + 30, y0 + 30),), (cx, y0 + 19))
            elif kind == "university":
                self._add("r", {"amenity": "university", "type": "multipolygon"}, (area,), (cx, cy))
                for dy in (-q, q):
                    o = self._building(cx, cy + dy, 80, 50, {"building": "university", "building_levels": "3"})
                    self.offices.append(o)
            elif kind == "retail":
                self._add("w", {"landuse": "retail"}, (area,), (cx, cy))
                for k, (dx, dy) in enumerate([(-q, -q), (q, -q), (-q, q), (q, q)]):
                    if k == 0:
                        tags = {"building": "retail", "shop": "supermarket"}
                        s = self._building(cx + dx, cy + dy, 40, 40, tags)
                        self.evening.append(s)
                    else:
                        amenity = eatery_kinds[int(rng.integers(len(eatery_kinds)))]
                        s = self._building(cx + dx, cy + dy, 25, 25, {"building": "retail", "amenity": amenity})
                        if amenity == "pub":
                            self.evening.append(s)
                        else:
                            self.eateries.append(s)
            else:
                park = self._add("w", {"leisure": "park"}, (area,), (cx, cy))
                self.evening.append(park)
                path = CoordinateSet((self.latlng(x0 + 10, y0 + 10), self.latlng(x0 + b - 10, y0 + b - 10)))
                self._add("w", {"highway": "footway"}, (path,), (cx, cy))
                for dx, dy in ((-30, -30), (30, 30)):
                    pt = (cx + dx, cy + dy)
                    self._add("n", {"amenity": "bench"}, (CoordinateSet((self.latlng(*pt),)),), pt)
        for _ in range(max(2, g + 2)):
            x = float(rng.uniform(0, g * b))
            line = int(rng.integers(0, g + 1))
            pt = (x, line * b + 4)
            self.errands.append(self._add("n", {"amenity": "post_box"}, (CoordinateSet((self.latlng(*pt),)),), pt))

    def route(self, src, dst):
        """Waypoints (metres) from one building centre to another along the road grid."""
        b = self.spec.block_m
        (sx, sy), (tx, ty) = self.centres[src], self.centres[dst]
        sy_road = math.floor(sy / b) * b
        ty_road = math.floor(ty / b) * b
        xk = round(((sx + tx) / 2) / b) * b
        return [(sx, sy), (sx, sy_road), (xk, sy_road), (xk, ty_road), (tx, ty_road), (tx, ty)]


def _along(path, dist):
    for (x0, y0), (x1, y1) in zip(path, path[1:]):
        seg = math.hypot(x1 - x0, y1 - y0)
        if dist <= seg and seg > 0:
            f = dist / seg
            return (x0 + f * (x1 - x0), y0 + f * (y1 - y0))
        dist -= seg
    return path[-1]


def _path_length(path):
    return sum(math.hypot(x1 - x0, y1 - y0) for (x0, y0), (x1, y1) in zip(path, path[1:]))


def generate(seed: int = 0, spec: SynthSpec = SynthSpec()) -> SynthData:
    rng = np.random.default_rng(seed)
    city = _City(spec, rng)
    home = city.homes[int(rng.integers(len(city.homes)))]
    office = city.offices[int(rng.integers(len(city.offices)))]

    def pool(items, size=3, exclude=()):
        items = [x for x in items if x not in exclude]
        picks = rng.choice(len(items), size=min(size, len(items)), replace=False)
        return [items[int(i)] for i in picks]

    coffee_pool = pool(city.eateries)
    lunch_pool = pool(city.eateries)
    meeting_pool = pool(city.offices, exclude=(office,))
    errand_pool = pool(city.errands)
    evening_pool = pool(city.evening)
    t0 = parse_instant(spec.start)

    def pick(items):
        return items[int(rng.integers(len(items)))]

    segments = []  # (begin, end, kind, payload)
    visits = []
    for day in range(spec.days):
        base = t0 + day * 86400
        # ("stay", element, end as hour of day | None, minimum minutes, activity)
        plan = [
            ("stay", home, 7.25, 0, "home"),
            ("stay", pick(coffee_pool), None, 10, "coffee"),
            ("stay", office, 10.5, 0, "work"),
            ("stay", pick(meeting_pool), None, 60, "meeting"),
            ("stay", office, 12.0, 0, "work"),
            ("stay", pick(lunch_pool), None, 40, "lunch"),
            ("stay", office, 15.0, 0, "work"),
            ("stay", pick(errand_pool), None, 5, "errand"),
            ("stay", office, 17.0, 0, "work"),
            ("stay", pick(evening_pool), None, int(rng.integers(45, 91)), "evening"),
            ("stay", home, 24.0, 0, "home"),
        ]
        t = base
        here = None
        for _, eid, until, minutes, activity in plan:
            if here is not None and here != eid:
                path = city.route(here, eid)
                end = t + _path_length(path) / WALK_SPEED
                segments.append((t, end, "move", path))
                t = end
            here = eid
            end = base + until * 3600 if until is not None else t + minutes * 60
            end = max(end, t)
            cx, cy = city.centres[eid]
            spot = (cx + float(rng.uniform(-8, 8)), cy + float(rng.uniform(-8, 8)))
            segments.append((t, end, "stay", spot))
            visits.append({"element": eid, "activity": activity,
                           "begin": format_instant(t), "end": format_instant(end)})
            t = end

    store = ElementStore(city.elements)
    index = build_index(store)
    points = []
    encountered: set[str] = set()
    total = spec.days * 86400
    k = 0
    seg_i = 0
    while k * spec.interval_s < total:
        ts = t0 + k * spec.interval_s
        k += 1
        while seg_i < len(segments) - 1 and ts >= segments[seg_i][1]:
            seg_i += 1
        begin, end, kind, payload = segments[seg_i]
        if kind == "move":
            x, y = _along(payload, (ts - begin) * WALK_SPEED)
            lo, hi = spec.move_accuracy
        else:
            x, y = payload
            lo, hi = spec.stay_accuracy
        acc = round(float(rng.uniform(lo, hi)), 1)
        noise = rng.normal(0.0, acc / 3.0, size=2)
        norm = math.hypot(*noise)
        if norm > acc:
            noise = noise * (acc / norm)
        lat, lng = city.latlng(x + float(noise[0]), y + float(noise[1]))
        points.append(TrajectoryPoint(ts, lat, lng, acc))
        true_ll = city.latlng(x, y)
        for eid in index.query(circle_bbox(true_ll, 2 * acc)):
            if circle_intersects_element(true_ll, 2 * acc, store[eid]):
                encountered.add(eid)
    return SynthData(points, store, synth_taxonomy(), visits, encountered)


def write_synth(seed: int, out_dir, spec: SynthSpec = SynthSpec()) -> dict[str, Path]:
    """Generate a dataset and write trajectory, land usage, taxonomy and visit log."""
    data = generate(seed, spec)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "trajectory": out / "trajectory.csv",
        "land_usage": out / "land_usage.json",
        "taxonomy": out / "taxonomy.txt",
        "visits": out / "visits.json",
    }
    write_trajectory(data.points, paths["trajectory"])
    write_land_usage(data.store, paths["land_usage"])
    write_taxonomy(data.taxonomy, paths["taxonomy"])
    paths["visits"].write_text(json.dumps({"visits": data.visits, "encountered": sorted(data.encountered)},
                                          indent=1) + "\n", encoding="utf-8")
    return paths
