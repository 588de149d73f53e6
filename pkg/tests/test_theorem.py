import math

import numpy as np
import pytest

from planarfix.dynamics.examples import example_families, shipped_maps
from planarfix.dynamics.maps import affine_conjugate, identity, linear_flow, rotation, translation
from planarfix.dynamics.orbits import orbit_array
from planarfix.dynamics.theorem import (
    TheoremConfig,
    check_commutation,
    find_capital_point,
    locate_common_fixed_point,
    orbit_samples,
    verify_orbit_localization,
)
from planarfix.errors import (
    CommonFixCheckFailed,
    CommutationViolation,
    LocalizationFailure,
    NoReturns,
    UnboundedOrbit,
)
from planarfix.geometry import build_closed_curve
from planarfix.winding import winding_number, winding_number_oracle

C = (0.3, 0.2)
SPIRAL = [[-0.3, -1.0], [1.0, -0.3]]


class TestCapitalPoint:
    def test_heptagon(self):
        cert = find_capital_point(rotation(2 * math.pi / 7, C), [], (1, 0))
        assert cert.point.as_tuple() == pytest.approx(C, abs=1e-9)
        assert cert.return_times[0] == 7 and cert.indices[0] == 1
        assert all(v != 0 for v in cert.indices)

    def test_with_commuting_fixer(self):
        cert = find_capital_point(rotation(0.05, C), [rotation(0.3, C)], (1, 0))
        assert cert.point.as_tuple() == pytest.approx(C, abs=1e-9)

    def test_fixer_that_moves_candidate(self):
        with pytest.raises(CommonFixCheckFailed):
            find_capital_point(rotation(2 * math.pi / 7, C), [rotation(0.3, (0, 0))], (1, 0))

    def test_translation(self):
        with pytest.raises(NoReturns):
            find_capital_point(translation((0.1, 0)), [], (0, 0))

    def test_indices_match_oracle(self):
        f = rotation(0.09, C)
        cert = find_capital_point(f, [], (0.9, -0.1))
        pts = orbit_array(f, (0.9, -0.1), max(cert.return_times))
        for n, ind in zip(cert.return_times, cert.indices):
            curve = build_closed_curve([tuple(p) for p in pts[:n]])
            assert winding_number_oracle(curve, cert.point).value == ind
            assert winding_number(curve, cert.point).value == ind

    def test_affine_conjugation_invariance(self):
        m, b = np.array([[1.1, 0.2], [-0.1, 0.95]]), np.array([0.2, -0.3])
        f, p = rotation(0.07, C), np.array([0.9, 0.4])
        base = find_capital_point(f, [], p)
        conj = find_capital_point(affine_conjugate(f, m, b), [], m @ p + b)
        expect = m @ np.array(base.point.as_tuple()) + b
        assert conj.point.as_tuple() == pytest.approx(tuple(expect), abs=1e-9)
        assert conj.indices[0] == base.indices[0]


class TestLocate:
    def test_common_centre_rotations(self):
        cert = locate_common_fixed_point([], [rotation(0.05, C), rotation(0.07, C)], (0.35, 0.25))
        assert cert.fixed_point.as_tuple() == pytest.approx(C, abs=1e-9)
        assert cert.hull_membership == "inside"
        assert max(cert.residuals) < 1e-9

    def test_seed_already_fixed(self):
        cert = locate_common_fixed_point([rotation(0.3, C)], [rotation(0.05, C)], C)
        assert cert.fixed_point.as_tuple() == C
        assert cert.steps[0]["case"] == "fixed"

    def test_spiral_flows_use_orbit_closure(self):
        fam = [linear_flow(SPIRAL, 0.05, C), linear_flow(SPIRAL, 0.08, C)]
        cert = locate_common_fixed_point([], fam, (0.8, 0.3))
        assert cert.fixed_point.as_tuple() == pytest.approx(C, abs=1e-9)
        assert cert.steps[0]["case"] == "orbit-closure"

    def test_centre_flows_use_capital_point(self):
        fam = [linear_flow([[0, -1], [2, 0]], 0.05, C), linear_flow([[0, -1], [2, 0]], 0.08, C)]
        cert = locate_common_fixed_point([], fam, (0.8, 0.3))
        assert cert.fixed_point.as_tuple() == pytest.approx(C, abs=1e-9)
        assert cert.steps[0]["case"] == "capital"

    def test_non_commuting(self):
        with pytest.raises(CommutationViolation) as info:
            locate_common_fixed_point([], [rotation(0.05, (0, 0)), rotation(0.05, (1, 0))], (0.5, 0))
        assert info.value.residual > 1e-3

    def test_unbounded(self):
        with pytest.raises(UnboundedOrbit):
            locate_common_fixed_point([], [translation((0.1, 0)), translation((0, 0.1))], (0, 0))

    def test_seed_not_fixed_by_fixers(self):
        with pytest.raises(LocalizationFailure) as info:
            locate_common_fixed_point([rotation(0.3, C)], [rotation(0.05, C)], (1, 0))
        assert info.value.step == "seed"

    def test_certificate_json(self):
        cert = locate_common_fixed_point([], [rotation(0.05, C), rotation(0.07, C)], (1, 0))
        data = cert.to_dict()
        assert set(data) == {"generators", "seed", "fixed_point", "residuals", "hull",
                             "hull_membership", "hull_margin", "steps"}
        assert data["generators"][0]["spec"] == {"name": "rotation",
                                                 "params": {"angle": 0.05, "center": [0.3, 0.2]}}


class TestOrbitLocalization:
    def test_rotations(self):
        out = verify_orbit_localization(rotation(0.3, C), rotation(0.05, C), C, (1, 0), range(-5, 6))
        assert out["passed"] and len(out["entries"]) == 11

    def test_identity_reduces_to_hull(self):
        assert verify_orbit_localization(identity(), rotation(0.05, C), C, (1, 0), [0])["passed"]
        assert not verify_orbit_localization(identity(), rotation(0.05, C), (3, 3), (1, 0), [0])["passed"]

    def test_flows(self):
        h, f = linear_flow(SPIRAL, 0.05, C), linear_flow(SPIRAL, 0.08, C)
        assert verify_orbit_localization(h, f, C, (0.8, 0.3), range(-5, 6))["passed"]


class TestSamplingHelpers:
    def test_orbit_samples_count(self):
        pts = orbit_samples([rotation(0.1), rotation(0.2)], (1, 0), 10000)
        assert pts.shape == (10000, 2)
        assert pts[0] == pytest.approx([1, 0])

    def test_commutation_of_shipped_families(self):
        for fam in example_families(10, seed=3):
            assert check_commutation(list(fam.maps), fam.seed) < 1e-9

    def test_shipped_maps_named(self):
        maps = shipped_maps()
        assert "rotation-small" in maps and all(m.spec for m in maps.values())

    def test_config_defaults(self):
        cfg = TheoremConfig()
        assert (cfg.fixed_tol, cfg.epsilon1, cfg.epsilon2) == (1e-9, 0.05, 0.01)
