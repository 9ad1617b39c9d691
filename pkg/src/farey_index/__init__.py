"""Exact Farey-fraction index statistics and transfer-map geometry.

The package has four library layers and a CLI:

    geometry   exact rational points, convex polygons, clipping, unimodular maps
    farey      Farey-sequence walking, seeking, and the index of a fraction
    bcz        the area-preserving transfer map on the Farey triangle, its
               region decomposition, push-forwards and exact constants
    stats      exact index statistics at scale, paired with their predictions
    cli        the `farey-index` command-line harness
"""

__version__ = "0.1.0"

from .geometry import (
    ConvexPolygon,
    EMPTY_POLYGON,
    GeometryError,
    Point2,
    Rational,
    UnimodularMap,
    apply_map,
    clip_convex,
    contains_point,
    half_plane_clip,
    polygon_area,
)
from .farey import (
    FareyWalker,
    index_of,
    index_sequence,
    index_stream,
    interval_walk,
    neighbor_numerators,
    seek,
    totient_summatory,
    walker_start,
    walker_step,
)
from .bcz import (
    FAREY_TRIANGLE,
    OrbitState,
    PolygonSet,
    PowerMomentConstant,
    TailCertificateError,
    autocorrelation_constant,
    b_alpha,
    bcz_apply,
    intersection_area_table,
    lower_frequency,
    orbit,
    push_forward,
    region_polygon,
    region_star_polygon,
    star_intersection_area,
    upper_frequency,
    upper_lower_triangles,
)
from .stats import (
    StatRecord,
    autocorr_record,
    autocorr_sum,
    autocorr_sum_interval,
    hall_shiu_identity,
    lu_counts,
    lu_records,
    moment_record,
    partial_index_sum,
    partial_record,
    second_moment_record,
    sum_index,
    sum_index_power,
    visible_points_count,
)

__all__ = [name for name in dir() if not name.startswith("_")]
