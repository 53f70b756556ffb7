from .geometry import (
    EARTH_RADIUS_M,
    area_m2,
    circle_intersects_element,
    convex_hull,
    coordsets_intersect,
    haversine_m,
)
from .timeranges import merge_time_ranges, total_duration
from .types import (
    MIN_ACCURACY_M,
    CoordinateSet,
    LandUsageElement,
    Tag,
    TimeRange,
    Trajectory,
    TrajectoryPoint,
)

__all__ = [
    "EARTH_RADIUS_M", "MIN_ACCURACY_M", "CoordinateSet", "LandUsageElement", "Tag", "TimeRange",
    "Trajectory", "TrajectoryPoint", "area_m2", "circle_intersects_element", "convex_hull",
    "coordsets_intersect", "haversine_m", "merge_time_ranges", "total_duration",
]
