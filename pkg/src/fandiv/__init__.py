"""Fair division of masses by simplicial fans, curtains and circular splines."""

from . import errors
from .complexes import (
    ConfigPoint,
    JoinPoint,
    antipode,
    big_psi,
    canonical_allocations,
    decode_sphere,
    invert_psi,
    psi,
    sphere_chart,
)
from .geometry import (
    Curtain,
    DeltaZonotope,
    Fan,
    HalfSpace,
    Simplex,
    SimplicialCone,
    apex_fan,
    build_zonotope,
    canonical_partitions,
    classify_point,
    classify_points,
    cone_halfspaces,
    cone_index_set,
    curtain_from_partition,
    dual_difference_body,
    face_fan,
    front_face_map,
    new_simplex,
    pyramid_volume,
    regular_simplex,
    zonotope_map,
)
from .measures import (
    BodyUnion,
    PointCloud,
    PolytopeBody,
    alpha_vector,
    body_union,
    cloud_from_csv,
    disc_body,
    fan_masses,
    mass_in_cone,
    point_cloud,
    polytope_body,
    support_radius,
)
from .solver import (
    DiscrepancyMatrix,
    Instance,
    Solution,
    SolverConfig,
    acceptance_threshold,
    color_masses,
    cone_mass_matrix,
    counterexample_report,
    discretization_floor,
    limit_consistency,
    make_instance,
    solve_curtain,
    solve_fan,
    test_map,
    verify_prime_power,
)
from .splines import (
    ArcPiece,
    CircularSpline,
    SegmentPiece,
    SplineDivision,
    curtain_to_spline,
    lift_measure,
    lift_points,
    side_of_points,
    solve_circular_spline,
)

__version__ = "0.1.0"
