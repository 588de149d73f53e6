"""Untangling closed polygonal curves and locating common fixed points of
commuting planar maps."""
from planarfix.errors import PlanarFixError
from planarfix.geometry import (
    ClosedPolyCurve,
    ConvexPolygon,
    OrientedSegment,
    Point2,
    angle_between,
    build_closed_curve,
    convex_hull,
    point_in_hull,
    segment_intersection,
    separate_overlaps,
    subdivide_at_intersections,
    validate_angle_hypothesis,
)
from planarfix.kernels import BACKEND
from planarfix.untangle import (
    DecomposeConfig,
    DecompositionReport,
    SimpleLoop,
    build_vertex_star,
    decompose,
    nested_disk_chains,
    resolve_vertex,
    select_kappa,
    verify_decomposition,
)
from planarfix.winding import (
    covering_multiplicity,
    winding_number,
    winding_number_oracle,
)

__version__ = "0.1.0"
