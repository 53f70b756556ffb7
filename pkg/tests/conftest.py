import pytest

from contexttree.cluster import leaf_node
from contexttree.core import CoordinateSet, LandUsageElement, Tag, TimeRange
from contexttree.ingest import Taxonomy
from contexttree.summarise import ElementInteraction


def square(lat, lng, side_deg=0.001):
    return CoordinateSet(((lat, lng), (lat, lng + side_deg), (lat + side_deg, lng + side_deg),
                          (lat + side_deg, lng)), closed=True)


def element(eid, tags, coordsets=None, lat=52.0, lng=-1.0):
    tags = frozenset(Tag(k, v) for k, v in tags.items()) if isinstance(tags, dict) else frozenset(tags)
    return LandUsageElement(eid, tags, tuple(coordsets or (square(lat, lng),)))


def leaf(i, tags, times=((0, 60),), coordsets=None, lat=52.0, lng=-1.0):
    e = element(f"w_{i}", tags, coordsets, lat, lng)
    return leaf_node(i, ElementInteraction(e, tuple(TimeRange(a, b) for a, b in times)))


@pytest.fixture
def small_taxonomy():
    # depths: entity 1; building, highway 2; house, university, road 3; primary 4
    return Taxonomy({"entity": None, "building": "entity", "highway": "entity", "house": "building",
                     "university": "building", "road": "highway", "primary": "road"})
