"""Semantic, feature and geographic similarity between clusters."""
from __future__ import annotations

import math
from collections import Counter
from itertools import product
from typing import Iterable

from ..core.geometry import area_m2, haversine_m
from ..core.types import Tag
from ..errors import EmptyTagSet
from ..ingest import Taxonomy, tokens
from .node import ContextNode, FeatureBinning

TAG_SIM_MODES = ("keys", "values", "combined")


def wup_similarity(tax: Taxonomy, a: str, b: str) -> float:
    """Wu-Palmer similarity ``2*depth(lcs) / (depth(a) + depth(b))``.

    Words missing from the taxonomy score 1 against an equal word, else 0.
    """
    a, b = a.lower(), b.lower()
    if a in tax and b in tax:
        if a == b:
            return 1.0
        return 2.0 * tax.depth[tax.lcs(a, b)] / (tax.depth[a] + tax.depth[b])
    return 1.0 if a == b else 0.0


def word_similarity(tax: Taxonomy, a: str, b: str) -> float:
    """Best Wu-Palmer score over the tokens of two multi-word strings."""
    if a == b:
        return 1.0
    return max(wup_similarity(tax, x, y) for x, y in product(tokens(a), tokens(b)))


def tag_pair_similarity(tax: Taxonomy, t1: Tag, t2: Tag, mode: str = "combined") -> float:
    if mode == "keys":
        return word_similarity(tax, t1.key, t2.key)
    if mode == "values":
        return word_similarity(tax, t1.value, t2.value)
    if mode == "combined":
        return 0.5 * word_similarity(tax, t1.key, t2.key) + 0.5 * word_similarity(tax, t1.value, t2.value)
    raise ValueError(f"unknown tag similarity mode {mode!r}")


def tag_sim(t1: Iterable[Tag], t2: Iterable[Tag], tax: Taxonomy, mode: str = "combined") -> float:
    """Mean over ``t1`` of each tag's best match in ``t2``. Not symmetric."""
    t1, t2 = sorted(t1), sorted(t2)
    if not t1:
        raise EmptyTagSet("first tag set is empty")
    if not t2:
        return 0.0
    return sum(max(tag_pair_similarity(tax, a, b, mode) for b in t2) for a in t1) / len(t1)


def semantic_similarity(c1: ContextNode, c2: ContextNode, tax: Taxonomy, mode: str = "combined") -> float:
    if not c1.tags or not c2.tags:
        return 0.0
    return max(tag_sim(c1.tags, c2.tags, tax, mode), tag_sim(c2.tags, c1.tags, tax, mode))


def _log_bin(value: float, base: float) -> int:
    if base == 2:
        v = math.log2(value)
    elif base == 10:
        v = math.log10(value)
    else:
        v = math.log(value, base)
    return math.floor(v + 1e-12)


def feature_strings(c: ContextNode, b: FeatureBinning = FeatureBinning()) -> frozenset[str]:
    """The four discretised interaction features of a cluster.

    mean duration (log-binned minutes), modal start time-of-day bin, number of
    interactions (log-binned) and total area (log-binned m^2).
    """
    dname = f"duration_log{b.duration_log_base:g}m"
    cname = f"count_log{b.count_log_base:g}"
    aname = f"area_log{b.area_log_base:g}"
    n = len(c.times)
    if n:
        mean_minutes = sum(r.duration for r in c.times) / n / 60.0
        duration = f"{dname}_{_log_bin(max(1.0, mean_minutes), b.duration_log_base)}"
        bins = Counter(
            math.floor((r.begin % 86400.0) / 3600.0 / b.time_of_day_bin) * b.time_of_day_bin for r in c.times
        )
        top = max(bins.values())
        tod = f"timeofday_{min(h for h, k in bins.items() if k == top):g}"
    else:
        duration = f"{dname}_none"
        tod = "timeofday_none"
    count = f"{cname}_{_log_bin(max(1, n), b.count_log_base)}"
    area = sum(area_m2(s) for s in c.coordsets)
    area_s = f"{aname}_{_log_bin(area, b.area_log_base)}" if area > 0 else f"{aname}_none"
    return frozenset((duration, tod, count, area_s))


def jaccard(f1: frozenset, f2: frozenset) -> float:
    union = f1 | f2
    if not union:
        return 1.0
    return len(f1 & f2) / len(union)


def feature_similarity(c1: ContextNode, c2: ContextNode, b: FeatureBinning = FeatureBinning()) -> float:
    return jaccard(feature_strings(c1, b), feature_strings(c2, b))


def geographical_distance(c1: ContextNode, c2: ContextNode) -> float:
    """Smallest haversine distance between any vertex of ``c1`` and any of ``c2``."""
    p1 = {p for s in c1.coordsets for p in s.points}
    p2 = {p for s in c2.coordsets for p in s.points}
    return min(haversine_m(a, b) for a in p1 for b in p2)


def combine(lam: float, semantic: float, feature: float) -> float:
    # 1 - (lam*s + (1-lam)*f), arranged so that s = f = 1 gives exactly 0
    d = lam * (1.0 - semantic) + (1.0 - lam) * (1.0 - feature)
    return min(1.0, max(0.0, d))


def hcd(c1: ContextNode, c2: ContextNode, lam: float, tax: Taxonomy,
        b: FeatureBinning = FeatureBinning(), mode: str = "combined") -> float:
    """Hybrid contextual distance; geography plays no part."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    return combine(lam, semantic_similarity(c1, c2, tax, mode), feature_similarity(c1, c2, b))


class HybridDistance:
    """HCD with memoised word, feature and cluster-pair similarities.

    Nodes are never mutated after construction, so results are cached per
    node object for the lifetime of this instance.
    """

    def __init__(self, tax: Taxonomy, lam: float, binning: FeatureBinning = FeatureBinning(),
                 mode: str = "combined"):
        if not 0.0 <= lam <= 1.0:
            raise ValueError(f"lambda must lie in [0, 1], got {lam}")
        if mode not in TAG_SIM_MODES:
            raise ValueError(f"unknown tag similarity mode {mode!r}")
        self.tax, self.lam, self.binning, self.mode = tax, lam, binning, mode
        self._words: dict[tuple[str, str], float] = {}
        self._features: dict[ContextNode, frozenset[str]] = {}
        self._pairs: dict[tuple[ContextNode, ContextNode], float] = {}

    def _word(self, a: str, b: str) -> float:
        key = (a, b) if a <= b else (b, a)
        v = self._words.get(key)
        if v is None:
            v = self._words[key] = word_similarity(self.tax, a, b)
        return v

    def _tag(self, t1: Tag, t2: Tag) -> float:
        if self.mode == "keys":
            return self._word(t1.key, t2.key)
        if self.mode == "values":
            return self._word(t1.value, t2.value)
        return 0.5 * self._word(t1.key, t2.key) + 0.5 * self._word(t1.value, t2.value)

    def _tag_sim(self, t1, t2) -> float:
        if not t2:
            return 0.0
        return sum(max(self._tag(a, b) for b in t2) for a in t1) / len(t1)

    def semantic(self, c1: ContextNode, c2: ContextNode) -> float:
        if not c1.tags or not c2.tags:
            return 0.0
        t1, t2 = sorted(c1.tags), sorted(c2.tags)
        return max(self._tag_sim(t1, t2), self._tag_sim(t2, t1))

    def features(self, c: ContextNode) -> frozenset[str]:
        f = self._features.get(c)
        if f is None:
            f = self._features[c] = feature_strings(c, self.binning)
        return f

    def __call__(self, c1: ContextNode, c2: ContextNode) -> float:
        if c1 is c2:
            return combine(self.lam, 1.0 if c1.tags else 0.0, 1.0)
        key = (c1, c2) if c1.id <= c2.id else (c2, c1)
        d = self._pairs.get(key)
        if d is None:
            d = self._pairs[key] = combine(self.lam, self.semantic(c1, c2),
                                           jaccard(self.features(c1), self.features(c2)))
        return d
