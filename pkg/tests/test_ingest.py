import json
from collections import deque

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from contexttree.core import CoordinateSet, LandUsageElement, Tag, TrajectoryPoint
from contexttree.errors import (
    CycleDetected, DataError, DuplicateId, EmptyFile, MalformedGeometry, MalformedRecord, MultipleRoots,
    UnknownParent,
)
from contexttree.ingest import (
    ElementStore, Taxonomy, parse_land_usage, parse_taxonomy, parse_trajectory, tokens, write_land_usage,
    write_taxonomy, write_trajectory,
)


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


class TestTrajectory:
    def test_three_lines_sorted(self, tmp_path):
        p = write(tmp_path, "t.csv", "2013-11-08T10:02:00Z,52.0,-1.0,12\n"
                                     "2013-11-08T10:00:00Z,52.1,-1.1,5\n"
                                     "2013-11-08T10:01:00Z,52.2,-1.2,7\n")
        pts = parse_trajectory(p)
        assert [p.lat for p in pts] == [52.1, 52.2, 52.0]

    def test_default_accuracy(self, tmp_path):
        p = write(tmp_path, "t.csv", "timestamp,lat,lng\n0,1,2\n60,1,2\n")
        assert {p.accuracy for p in parse_trajectory(p)} == {10.0}
        assert {p.accuracy for p in parse_trajectory(p, default_accuracy=25)} == {25.0}

    def test_accuracy_clamped(self, tmp_path):
        p = write(tmp_path, "t.csv", "0,1,2,0.2\n1,1,2,-4\n")
        assert [p.accuracy for p in parse_trajectory(p)] == [1.0, 1.0]

    def test_stable_ties(self, tmp_path):
        rows = [(t, i) for i, t in enumerate([5, 3, 5, 1, 3, 5])]
        p = write(tmp_path, "t.csv", "".join(f"{t},{i},0,10\n" for t, i in rows))
        got = [(p.timestamp, p.lat) for p in parse_trajectory(p)]
        assert got == sorted(((float(t), float(i)) for t, i in rows), key=lambda r: r[0])

    def test_header_order_and_lon(self, tmp_path):
        p = write(tmp_path, "t.csv", "accuracy,lon,lat,timestamp\n3,-1.5,52.5,1970-01-01T00:01:00Z\n")
        (pt,) = parse_trajectory(p)
        assert (pt.timestamp, pt.lat, pt.lng, pt.accuracy) == (60.0, 52.5, -1.5, 3.0)

    def test_jsonl(self, tmp_path):
        p = write(tmp_path, "t.jsonl", '{"timestamp": "2013-11-08T10:00:00Z", "latlng": [52, -1]}\n'
                                       '{"timestamp": 10, "lat": 52, "lng": -1, "accuracy": 4}\n')
        pts = parse_trajectory(p)
        assert [p.accuracy for p in pts] == [4.0, 10.0]

    def test_errors(self, tmp_path):
        with pytest.raises(EmptyFile):
            parse_trajectory(write(tmp_path, "e.csv", "\n\n"))
        with pytest.raises(MalformedRecord) as info:
            parse_trajectory(write(tmp_path, "b.csv", "0,1,2\n1,1\n"))
        assert info.value.line == 2
        with pytest.raises(MalformedRecord) as info:
            parse_trajectory(write(tmp_path, "c.csv", "0,1,2\n1,95,2\n"))
        assert info.value.line == 2
        with pytest.raises(MalformedRecord):
            parse_trajectory(write(tmp_path, "h.csv", "time,lat,lng\n0,1,2\n"))

    def test_round_trip(self, tmp_path):
        pts = [TrajectoryPoint(1383919791.25, 52.123456789, -1.5, 7.5), TrajectoryPoint(1383919851, 0.0, 0.0, 1.0)]
        write_trajectory(pts, tmp_path / "t.csv")
        assert parse_trajectory(tmp_path / "t.csv") == pts

    @settings(max_examples=200, suppress_health_check=[HealthCheck.function_scoped_fixture])
    @given(st.text(alphabet=st.characters(blacklist_categories=["Cs"]), max_size=200))
    def test_fuzz_only_typed_errors(self, tmp_path, text):
        for name in ("f.csv", "f.jsonl"):
            p = write(tmp_path, name, text)
            try:
                parse_trajectory(p)
            except DataError:
                pass

    def test_invalid_utf8(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_bytes(b"0,1,2\n\xff\xfe,1,2\n")
        with pytest.raises(MalformedRecord) as info:
            parse_trajectory(p)
        assert info.value.line == 2


def land_doc(*elements):
    return json.dumps({"elements": list(elements)})


BUILDING = {"id": "w_145179860", "tags": {"building": "university", "building_levels": "3"},
            "coordsets": [{"closed": True, "points": [[52.38, -1.56], [52.38, -1.559], [52.381, -1.559]]}]}


class TestLandUsage:
    def test_two_tags(self, tmp_path):
        store = parse_land_usage(write(tmp_path, "l.json", land_doc(BUILDING)))
        assert store["w_145179860"].tags == {Tag("building", "university"), Tag("building_levels", "3")}

    def test_empty_list(self, tmp_path):
        assert len(parse_land_usage(write(tmp_path, "l.json", land_doc()))) == 0

    def test_duplicate(self, tmp_path):
        with pytest.raises(DuplicateId):
            parse_land_usage(write(tmp_path, "l.json", land_doc(BUILDING, BUILDING)))

    def test_bad_geometry(self, tmp_path):
        bad = dict(BUILDING, coordsets=[{"closed": True, "points": [[0, 0], [0, 1]]}])
        with pytest.raises(MalformedGeometry):
            parse_land_usage(write(tmp_path, "l.json", land_doc(bad)))
        bad = dict(BUILDING, coordsets=[])
        with pytest.raises(MalformedGeometry):
            parse_land_usage(write(tmp_path, "l.json", land_doc(bad)))
        bad = dict(BUILDING, coordsets=[{"closed": False, "points": [[100, 0]]}])
        with pytest.raises(MalformedGeometry):
            parse_land_usage(write(tmp_path, "l.json", land_doc(bad)))

    def test_dangling_members_warn(self, tmp_path, caplog):
        rel = {"id": "r_1", "tags": {"type": "site"}, "members": ["w_145179860", "w_404"],
               "coordsets": [{"closed": False, "points": [[52.38, -1.56]]}]}
        store = parse_land_usage(write(tmp_path, "l.json", land_doc(BUILDING, rel)))
        assert store.dangling == [("r_1", "w_404")]
        assert "w_404" in caplog.text

    def test_repeated_keys_round_trip(self, tmp_path):
        e = LandUsageElement("n_1", frozenset({Tag("name", "a"), Tag("name", "b"), Tag("shop", "bakery")}),
                             (CoordinateSet(((1.0, 2.0),), False),), ("n_2",))
        store = ElementStore([e, LandUsageElement("n_2", frozenset(), (CoordinateSet(((1.0, 2.0),), False),))])
        write_land_usage(store, tmp_path / "l.json")
        assert parse_land_usage(tmp_path / "l.json") == store

    def test_errors_are_typed(self, tmp_path):
        for text in ("", "[]", '{"elements": 3}', '{"elements": [{"id": 5}]}', "{not json"):
            with pytest.raises(DataError):
                parse_land_usage(write(tmp_path, "l.json", text))


def bfs_depths(edges, root):
    children = {}
    for p, c in edges:
        children.setdefault(p, []).append(c)
    depth = {root: 1}
    queue = deque([root])
    while queue:
        w = queue.popleft()
        for c in children.get(w, ()):
            depth[c] = depth[w] + 1
            queue.append(c)
    return depth


class TestTaxonomy:
    def test_depths(self, tmp_path):
        edges = [("entity", "building"), ("building", "house"), ("building", "university")]
        tax = parse_taxonomy(write(tmp_path, "t.txt", "".join(f"{p} {c}\n" for p, c in edges)))
        assert tax.depth == bfs_depths(edges, "entity")
        assert [tax.depth[w] for w in ("entity", "building", "house", "university")] == [1, 2, 3, 3]

    def test_single_word(self, tmp_path):
        tax = parse_taxonomy(write(tmp_path, "t.txt", "# only a root\nEntity\n"))
        assert tax.root == "entity" and tax.depth == {"entity": 1}

    def test_cycle(self, tmp_path):
        with pytest.raises(CycleDetected):
            parse_taxonomy(write(tmp_path, "t.txt", "a b\nb c\nc a\n"))
        with pytest.raises(CycleDetected):
            parse_taxonomy(write(tmp_path, "t.txt", "a a\n"))

    def test_multiple_roots(self, tmp_path):
        with pytest.raises(MultipleRoots):
            parse_taxonomy(write(tmp_path, "t.txt", "a b\nc d\n"))

    def test_unknown_parent(self):
        with pytest.raises(UnknownParent):
            Taxonomy({"a": None, "b": "zzz"})

    def test_conflicting_parent(self, tmp_path):
        with pytest.raises(MalformedRecord) as info:
            parse_taxonomy(write(tmp_path, "t.txt", "r a\nr b\na c\nb c\n"))
        assert info.value.line == 4

    def test_lcs(self, small_taxonomy):
        assert small_taxonomy.lcs("house", "university") == "building"
        assert small_taxonomy.lcs("primary", "house") == "entity"
        assert small_taxonomy.lcs("road", "primary") == "road"

    @given(st.lists(st.integers(0, 30), min_size=1, max_size=30))
    def test_round_trip_random_trees(self, parents):
        # node i+1 hangs under a random earlier node
        mapping = {"w0": None}
        for i, p in enumerate(parents, start=1):
            mapping[f"w{i}"] = f"w{p % i}"
        tax = Taxonomy(mapping)
        import tempfile, pathlib
        with tempfile.TemporaryDirectory() as d:
            path = pathlib.Path(d) / "t.txt"
            write_taxonomy(tax, path)
            assert parse_taxonomy(path) == tax


def test_tokens():
    assert tokens("bus_stop") == ["bus", "stop"]
    assert tokens("Post  Box") == ["post", "box"]
    assert tokens("_") == ["_"]
