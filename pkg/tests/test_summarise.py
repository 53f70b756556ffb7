import random

from hypothesis import given, strategies as st

from contexttree.augment import AugmentedPoint
from contexttree.core import TrajectoryPoint
from contexttree.ingest import ElementStore
from contexttree.summarise import interaction_periods, summarise

from conftest import element


def ap(t, ids):
    return AugmentedPoint(TrajectoryPoint(float(t), 0.0, 0.0, 10.0), frozenset(ids))


STORE = ElementStore([element(e, {"building": "yes"}) for e in ("a", "b", "c")])


def spans(interaction):
    return [(r.begin, r.end) for r in interaction.times]


def test_contiguous():
    (it,) = summarise([ap(0, "a"), ap(60, "a"), ap(120, "a")], STORE, 1200)
    assert spans(it) == [(0, 120)]


def test_split_gives_zero_duration_ranges():
    (it,) = summarise([ap(0, "a"), ap(2000, "a")], STORE, 1200)
    assert spans(it) == [(0, 0), (2000, 2000)]


def test_gap_equal_to_t_max_does_not_split():
    assert [(r.begin, r.end) for r in interaction_periods([0, 1200, 2401], 1200)] == [(0, 1200), (2401, 2401)]


def test_order_by_first_contact():
    out = summarise([ap(0, "b"), ap(10, "ab"), ap(20, "c")], STORE, 100)
    assert [it.element.id for it in out] == ["b", "a", "c"]
    assert summarise([], STORE) == []


def gap_oracle(stamps, t_max):
    """Brute force: two listing points share a period iff every gap between them is <= t_max."""
    groups = []
    for s in stamps:
        if groups and s - groups[-1][-1] <= t_max:
            groups[-1].append(s)
        else:
            groups.append([s])
    return [(g[0], g[-1]) for g in groups]


@given(st.lists(st.integers(0, 20000), min_size=1, max_size=60), st.integers(0, 3000))
def test_matches_gap_oracle(raw, t_max):
    stamps = sorted(raw)
    pts = [ap(t, "a") for t in stamps]
    (it,) = summarise(pts, STORE, t_max)
    assert spans(it) == gap_oracle(stamps, t_max)
    # every listing point lies in exactly one range
    for t in stamps:
        assert sum(r.begin <= t <= r.end for r in it.times) == 1


def test_monotone_in_t_max():
    rng = random.Random(1)
    pts = [ap(t, rng.sample("abc", rng.randint(0, 3))) for t in sorted(rng.sample(range(50000), 400))]
    prev = None
    for t_max in (0, 60, 300, 600, 1200, 2400, 5000):
        counts = {it.element.id: len(it.times) for it in summarise(pts, STORE, t_max)}
        if prev is not None:
            assert all(counts[e] <= prev[e] for e in counts)
        prev = counts
