import math
import random

import pytest

from contexttree.cluster import ContextNode, ContextTree, build_context_tree, merge_clusters
from contexttree.core import CoordinateSet, Tag, TimeRange
from contexttree.core.geometry import METRES_PER_DEGREE, area_m2
from contexttree.prune import (
    PruneParams, cost, cost_benefit, information, mean_pairwise_hcd, prune_sweep, prune_tree, pruned_ids,
    utility,
)
from contexttree.cluster import HybridDistance

from conftest import leaf, square
from test_cluster import VOCAB_TAX, interactions_of, random_leaf


def node(i, tags=(), times=(), coordsets=(), children=(), eid=None):
    return ContextNode(i, frozenset(Tag(k, v) for k, v in tags), tuple(TimeRange(a, b) for a, b in times),
                       tuple(coordsets), list(children), eid)


def metre_square(side, lat=0.0, lng=0.0):
    d = side / METRES_PER_DEGREE
    return CoordinateSet(((lat, lng), (lat, lng + d), (lat + d, lng + d), (lat + d, lng)), True)


class TestCost:
    def test_verbatim_child_costs_xi(self):
        s = square(52, -1)
        c = node(0, [("a", "b")], [(0, 60)], [s])
        p = node(1, [("a", "b"), ("c", "d")], [(0, 60), (100, 200)], [s, square(53, -1)])
        assert cost(c, p, 1.0) == 1.0
        assert cost(c, p, 0.25) == 0.25

    def test_widened_range(self):
        c = node(0, times=[(10, 20)], coordsets=[square(52, -1)])
        p = node(1, times=[(0, 60)], coordsets=[square(52, -1)])
        assert cost(c, p, 1.0) == 2.0

    def test_hull_merged_coordset(self):
        s1, s2 = square(52, -1), square(52.0005, -0.9995)
        a = leaf(0, {"a": "b"}, coordsets=[s1])
        b = leaf(1, {"a": "b"}, coordsets=[s2])
        p = merge_clusters([a, b], 2)
        hull_pool = set(p.coordsets[0].points)
        absent = sum(q not in hull_pool for q in s1.points)
        assert absent == 1  # the corner buried inside the other square
        assert cost(a, p, 1.0) == 1.0 + 0 + 1 + absent

    def test_tolerance(self):
        c = node(0, coordsets=[CoordinateSet(((52.0, -1.0),), False)])
        p = node(1, coordsets=[CoordinateSet(((52.0 + 1e-12, -1.0),), False)])
        assert cost(c, p, 1.0) == 1.0


class TestInformationUtility:
    def test_information(self):
        assert information(node(0, [("a", "b"), ("c", "d")], [(0, 3600)],
                                [CoordinateSet(((0.0, 0.0),), False)])) == 3602
        assert information(node(0)) == 0

    def test_information_components(self):
        rng = random.Random(1)
        for i in range(30):
            n = random_leaf(rng, i)
            want = sum(r.end - r.begin for r in n.times) + sum(area_m2(s) for s in n.coordsets) + len(n.tags)
            assert information(n) == pytest.approx(want, rel=1e-12)

    def test_utility_examples(self):
        sq = metre_square(100)
        p = node(1, [("a", "b"), ("c", "d")], [(0, 100)], [sq])
        assert utility(node(0, [("a", "b"), ("c", "d")], [(0, 100)], [sq]), p) == 0
        half = metre_square(100 / math.sqrt(2))
        assert utility(node(0, [("a", "b")], [(0, 50)], [half]), p) == pytest.approx(0.5, abs=1e-6)
        big = node(1, [(f"k{i}", "v") for i in range(1000)], [(0, 10 ** 7)], [metre_square(3000)])
        tiny = node(0, [("k0", "v")], [(0, 1)], [metre_square(1)])
        assert utility(tiny, big) > 0.999

    def test_zero_denominators(self):
        p = node(1, [("a", "b")], [(5, 5)], [CoordinateSet(((0.0, 0.0),), False)])
        c = node(0, [("a", "b")], [(5, 5)], [CoordinateSet(((0.0, 0.0),), False)])
        assert utility(c, p) == 0

    def test_cost_benefit(self):
        sq = square(52, -1)
        p = node(1, [("a", "b"), ("c", "d")], [(0, 100)], [sq])
        same = node(0, [("a", "b"), ("c", "d")], [(0, 100)], [sq])
        assert cost_benefit(same, p, 1.0) == 0
        part = node(0, [("a", "b")], [(0, 100)], [sq])
        assert cost_benefit(part, p, 0.5) == pytest.approx(2 * cost_benefit(part, p, 1.0))
        assert cost_benefit(part, p, 1.0) >= 0


def random_tree(seed, n=10, lam=0.5):
    rng = random.Random(seed)
    nodes = [random_leaf(rng, i) for i in range(n)]
    return build_context_tree(interactions_of(nodes), lam, VOCAB_TAX)


class TestPruneTree:
    def test_theta_zero_prunes_nothing(self):
        for seed in range(10):
            tree = random_tree(seed)
            _, rep = prune_tree(tree, PruneParams(0.0, 1.0), VOCAB_TAX)
            assert rep.pruned_count == 0 and rep.unpruned_count == len(tree.nodes())

    def test_identical_child_pruned(self):
        sq = square(52, -1)
        a = node(0, [("a", "b")], [(0, 60)], [sq], eid="w_0")
        b = node(1, [("a", "b")], [(0, 60)], [sq], eid="w_1")
        root = merge_clusters([a, b], 2)
        tree = ContextTree(root, 0.5)
        for theta in (1e-9, 0.1, 1.0):
            assert pruned_ids(tree, PruneParams(theta, 1.0)) == {0, 1}

    def test_root_never_pruned(self):
        tree = random_tree(3)
        pruned, _ = prune_tree(tree, PruneParams(100.0, 1.0), VOCAB_TAX)
        assert pruned.root.id == tree.root.id and pruned.root.is_leaf

    def test_upward_closed_and_counts(self):
        for seed in range(15):
            tree = random_tree(seed, n=random.Random(seed).randint(2, 12))
            parent = {c.id: n.id for n in tree.nodes() for c in n.children}
            for theta in (0.05, 0.2, 0.5):
                gone = pruned_ids(tree, PruneParams(theta, 1.0))
                for nid in gone:
                    # everything below a pruned node is pruned too
                    sub = next(n for n in tree.nodes() if n.id == nid)
                    assert all(x.id in gone for x in sub.walk())
                survivors = {n.id for n in tree.nodes()} - gone
                for nid in survivors:
                    if nid in parent:
                        assert parent[nid] in survivors
                pruned, rep = prune_tree(tree, PruneParams(theta, 1.0), VOCAB_TAX)
                assert rep.unpruned_count + rep.pruned_count == len(tree.nodes())
                assert {n.id for n in pruned.nodes()} == survivors

    def test_monotone_over_grids(self):
        for seed in range(10):
            tree = random_tree(seed, n=12)
            rows = prune_sweep(tree, VOCAB_TAX, [(t / 10, 1.0) for t in range(11)])
            for key in ("unpruned", "information"):
                vals = [r[key] for r in rows]
                assert all(b <= a + 1e-9 for a, b in zip(vals, vals[1:]))
            rows = prune_sweep(tree, VOCAB_TAX, [(0.2, x) for x in (0.5, 1.0, 1.5, 2.0)])
            vals = [r["unpruned"] for r in rows]
            assert all(b <= a for a, b in zip(vals, vals[1:]))
            assert rows[0]["information"] <= information_total(tree)
            if rows[0]["pruned"] == 0:
                assert rows[0]["information"] == pytest.approx(information_total(tree))

    def test_report_hcd(self):
        tree = random_tree(1, n=6)
        _, rep = prune_tree(tree, PruneParams(0.0, 1.0), VOCAB_TAX)
        metric = HybridDistance(VOCAB_TAX, tree.lam)
        assert rep.avg_leaf_hcd == pytest.approx(mean_pairwise_hcd(tree.root.leaves(), metric))
        assert mean_pairwise_hcd([tree.root], metric) == 0


def information_total(tree):
    return sum(information(n) for n in tree.nodes())
