import filecmp

import pytest

from contexttree.augment import augment_trajectory, build_index
from contexttree.filtering import FilterParams, filter_trajectory
from contexttree.ingest import parse_land_usage, parse_taxonomy, parse_trajectory, tokens
from contexttree.summarise import summarise
from contexttree.synth import SynthSpec, generate, write_synth


@pytest.fixture(scope="module")
def day():
    return generate(0)


def test_same_seed_same_files(tmp_path):
    a = write_synth(0, tmp_path / "a")
    b = write_synth(0, tmp_path / "b")
    for key in a:
        assert filecmp.cmp(a[key], b[key], shallow=False)
    c = write_synth(1, tmp_path / "c")
    assert not filecmp.cmp(a["trajectory"], c["trajectory"], shallow=False)


def test_files_parse(tmp_path, day):
    paths = write_synth(0, tmp_path)
    assert parse_land_usage(paths["land_usage"]) == day.store
    assert parse_trajectory(paths["trajectory"]) == day.points
    assert parse_taxonomy(paths["taxonomy"]) == day.taxonomy


def test_scale(day):
    assert len(day.points) == 1440
    assert 250 <= len(day.store) <= 400
    assert day.points[-1].timestamp - day.points[0].timestamp == 1439 * 60


def test_vocabulary_covered(day):
    words = {w for e in day.store for t in e.tags for w in tokens(t.key) + tokens(t.value)}
    known = [w for w in words if w in day.taxonomy]
    assert len(known) / len(words) > 0.6


def test_visits_and_recovered_leaves(day):
    aug = augment_trajectory(day.points, build_index(day.store), day.store)
    leaves = {it.element.id for it in summarise(filter_trajectory(aug, FilterParams(1200, 0.0), True), day.store)}
    visited = {v["element"] for v in day.visits}
    assert visited <= leaves <= day.encountered


def test_days_and_interval():
    d = generate(3, SynthSpec(days=2, interval_s=120))
    assert len(d.points) == 2 * 720
    assert {v["activity"] for v in d.visits} >= {"home", "work", "lunch", "evening"}
