"""Planar maps, orbit curves and fixed-point localization."""
from planarfix.dynamics.counterexample import CounterexampleReport, c0_distance, counterexample_family
from planarfix.dynamics.degree import (
    FixedPointResult,
    displacement_degree,
    fixed_point_in_disk,
    search_fixed_point,
)
from planarfix.dynamics.examples import ExampleFamily, example_families, shipped_maps
from planarfix.dynamics.maps import (
    REGISTRY,
    DiffeoMap,
    affine,
    affine_conjugate,
    build_map,
    bump_rotation,
    compose,
    conjugate,
    fold_shear,
    identity,
    linear_flow,
    rotation,
    scaling,
    translation,
    tube_flow,
)
from planarfix.dynamics.orbits import (
    DEFAULT_DOMAIN,
    UNIT_BOX,
    Box,
    C1Estimate,
    CheckResult,
    Disk,
    OrbitCurve,
    check_B1,
    check_B2,
    check_segment_estimate,
    estimate_c1_distance,
    orbit,
    orbit_curve,
    return_times,
)
from planarfix.dynamics.theorem import (
    CapitalPointCertificate,
    TheoremCertificate,
    TheoremConfig,
    check_commutation,
    find_capital_point,
    locate_common_fixed_point,
    orbit_samples,
    verify_orbit_localization,
)

__all__ = [name for name in dir() if not name.startswith("_")]
