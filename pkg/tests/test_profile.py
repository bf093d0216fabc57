import io
import math

import numpy as np
import pytest

import rotsurf as rs
from rotsurf import ExtensionSpec, PhasePoint, ProfileCurve
from rotsurf.errors import (
    DegenerateProfileError,
    ExtensionSpecError,
    NoSignChangeError,
    NotPeriodicError,
    TooFewSamplesError,
)

SQRT2 = math.sqrt(2.0)


@pytest.fixture(scope="module")
def periodic_setup(cfg, lambda0):
    lam = lambda0.value + 1.0
    info = rs.find_period(lam, cfg)
    back = rs.backward_trajectory(lam, cfg)
    t0 = -back.crossing_time(0.0)
    t1 = -back.crossing_time(math.pi / 2)
    full = rs.concat(back, rs.reflect(back, 1))
    prof = rs.build_profile(full, kind="Periodic")
    return lam, info, prof, t0, t1


class TestBuildProfile:
    def test_x_zero_at_origin(self, cfg):
        prof = rs.build_profile(rs.full_curve(2.0, cfg))
        assert prof.eval_at(0.0)[0] == pytest.approx(0.0, abs=1e-12)

    def test_sphere_trajectory_quadrature(self, cfg):
        # trajectory-built sphere: x(t) = -sqrt(2) sin(t/sqrt2), circle about
        # the origin (the closed form is the same curve shifted by -sqrt2)
        back = rs.integrate(PhasePoint(math.pi, SQRT2), "backward", cfg)
        full = rs.concat(back, rs.reflect(back, 1))
        prof = rs.build_profile(full, kind="Sphere")
        sel = np.abs(prof.t) < abs(prof.t[0]) - 1e-3
        x_ref = -SQRT2 * np.sin(prof.t[sel] / SQRT2)
        assert np.max(np.abs(prof.x[sel] - x_ref)) < 1e-8
        r = np.hypot(prof.x[sel], prof.z[sel])
        assert np.max(np.abs(r - SQRT2)) < 1e-8

    def test_odd_symmetry_of_x(self, cfg):
        prof = rs.build_profile(rs.full_curve(4.0, cfg))
        for t in (0.3, 0.9, 1.7):
            xp = prof.eval_at(t)[0]
            xm = prof.eval_at(-t)[0]
            assert xp == pytest.approx(-xm, abs=1e-9)

    def test_unit_speed_from_samples(self, cfg):
        prof = rs.build_profile(rs.full_curve(2.5, cfg))
        dx = np.diff(prof.x) / np.diff(prof.t)
        dz = np.diff(prof.z) / np.diff(prof.t)
        speed = np.hypot(dx, dz)
        # chord speed of a unit-speed curve deviates at O(dt^2)
        assert np.max(np.abs(speed - 1.0)) < 1e-4


class TestClosedForms:
    def test_sphere_profile_points(self):
        prof = rs.sphere_profile(n=501)
        i = np.argmin(np.abs(prof.t))
        assert prof.x[i] == pytest.approx(-SQRT2, abs=1e-15)
        assert prof.z[i] == pytest.approx(SQRT2, abs=1e-15)
        # every sample sits on the circle about (-sqrt2, 0) to machine precision
        r = np.hypot(prof.x + SQRT2, prof.z)
        assert np.max(np.abs(r - SQRT2)) < 1e-14
        # endpoints approach the axis
        assert prof.z[0] < 1e-5 and prof.z[-1] < 1e-5

    def test_sphere_profile_curvatures(self):
        prof = rs.sphere_profile(n=101)
        for i in range(0, 101, 10):
            c = rs.curvatures(PhasePoint(prof.theta[i], prof.z[i]))
            assert c.k1 == pytest.approx(1 / SQRT2, abs=1e-9)
            assert c.k2 == pytest.approx(1 / SQRT2, abs=1e-9)

    def test_cylinder_profile(self):
        prof = rs.cylinder_profile(3.0, n=7)
        assert np.all(prof.z == 1.0)
        assert np.all(prof.theta == 0.0)
        assert prof.x[0] == 0.0 and prof.x[-1] == 3.0
        # curvature pair (0, -1) on the boundary line: |A|^2 = 0 + 1
        k1, k2 = 0.0, -math.cos(0.0) / 1.0
        assert k1 ** 2 + k2 ** 2 == 1.0

    def test_validation(self):
        with pytest.raises(ValueError):
            rs.sphere_profile(n=1)
        with pytest.raises(ValueError):
            rs.cylinder_profile(0.0)


class TestPeriod:
    def test_shift_identities(self, periodic_setup):
        _, info, _, t0, _ = periodic_setup
        assert info.t0 == pytest.approx(t0, abs=1e-10)
        assert info.period == pytest.approx(2 * t0, rel=1e-12)
        assert info.z_residual <= 1e-8
        assert info.theta_residual <= 1e-8
        assert info.x_residual <= 1e-8

    def test_not_periodic_rejected(self, cfg):
        with pytest.raises(NotPeriodicError):
            rs.find_period(2.0, cfg)

    def test_against_angle_parametrized_oracle(self, periodic_setup):
        # independent route: fixed-step RK4 march of the angle-parametrized
        # form cross-checks t0, the crossing height, and x(-t0)
        from oracles import march_in_angle

        lam, info, prof, t0, _ = periodic_setup
        t0_oracle, z_cross_oracle, x_end_oracle, _, _ = march_in_angle(lam)
        assert info.t0 == pytest.approx(t0_oracle, abs=1e-9)
        assert prof.eval_at(-t0)[0] == pytest.approx(x_end_oracle, abs=1e-9)
        klass = rs.classify_lambda(lam, rs.IntegratorConfig())
        assert klass.crossing_z == pytest.approx(z_cross_oracle, abs=1e-9)


class TestSelfIntersection:
    def test_witness(self, periodic_setup):
        _, _, prof, t0, t1 = periodic_setup
        # bracket for the double-point search: x(-t0) < 0 < x(-t1)
        assert prof.eval_at(-t0)[0] < 0.0 < prof.eval_at(-t1)[0]
        info = rs.find_self_intersection(prof, t0, t1)
        assert t1 < info.t2 < t0
        assert info.x_abs <= 1e-8
        assert info.z_mismatch <= 1e-8
        assert info.point[0] == pytest.approx(0.0, abs=1e-8)
        assert info.point[1] > 1.0

    def test_bad_bracket_rejected(self, periodic_setup):
        _, _, prof, t0, t1 = periodic_setup
        with pytest.raises(NoSignChangeError):
            rs.find_self_intersection(prof, t1, t0)  # swapped

    def test_against_angle_parametrized_oracle(self, periodic_setup):
        from oracles import intersection_in_angle

        lam, _, prof, t0, t1 = periodic_setup
        info = rs.find_self_intersection(prof, t0, t1)
        t2_oracle, z2_oracle = intersection_in_angle(lam)
        assert info.t2 == pytest.approx(t2_oracle, abs=1e-8)
        assert info.point[1] == pytest.approx(z2_oracle, abs=1e-8)


class TestSeparatrixProfile:
    def test_metadata_and_symmetry(self, sep_profile, lambda0):
        b = sep_profile.meta["half_span"]
        assert sep_profile.meta["lambda0"] == pytest.approx(lambda0.value, abs=1e-6)
        lo, hi = sep_profile.span
        assert lo == pytest.approx(-b, abs=1e-12) and hi == pytest.approx(b, abs=1e-12)
        for t in (0.4, 1.9, 4.0):
            xp, zp, thp = sep_profile.eval_at(t)
            xm, zm, thm = sep_profile.eval_at(-t)
            assert xp == pytest.approx(-xm, abs=1e-9)
            assert zp == pytest.approx(zm, abs=1e-9)
            assert thp + thm == pytest.approx(2 * math.pi, abs=1e-9)

    def test_endpoints_at_corners(self, sep_profile):
        b = sep_profile.meta["half_span"]
        x, z, th = sep_profile.eval_at(-b)
        assert th == 0.0 and z == 1.0
        x2, z2, th2 = sep_profile.eval_at(b)
        assert th2 == pytest.approx(2 * math.pi, abs=1e-15) and z2 == 1.0
        assert x2 == pytest.approx(-x, abs=1e-9)

    def test_strictly_increasing_angle(self, sep_profile):
        # strict on sphere/separatrix interiors; constant only on the
        # cylinder and extension segments
        assert np.all(np.diff(sep_profile.theta) > 0.0)
        assert np.all(np.diff(rs.sphere_profile(n=301).theta) > 0.0)


class TestExtension:
    def test_spec_validation(self):
        with pytest.raises(ExtensionSpecError):
            ExtensionSpec(0, ())
        with pytest.raises(ExtensionSpecError):
            ExtensionSpec(3, (1.0,))
        with pytest.raises(ExtensionSpecError):
            ExtensionSpec(2, (-1.0,))

    def test_single_copy_is_identity(self, cfg, sep_profile):
        curve, rep = rs.extend_separatrix(ExtensionSpec(1, ()), cfg)
        assert rep.junctions == ()
        b = sep_profile.meta["half_span"]
        assert curve.span[1] == pytest.approx(2 * b, rel=1e-12)
        for t in (0.7, 2.0, 5.5):
            xs, zs, ths = sep_profile.eval_at(t - b)
            xc, zc, thc = curve.eval_at(t)
            assert zc == pytest.approx(zs, abs=1e-12)
            assert thc == pytest.approx(ths, abs=1e-12)

    def test_segment_junctions_are_c3(self, cfg):
        curve, rep = rs.extend_separatrix(ExtensionSpec(2, (1.0,)), cfg)
        assert len(rep.junctions) == 2
        types = [j.junction_type for j in rep.junctions]
        assert types == ["copy-segment", "segment-copy"]
        for j in rep.junctions:
            assert j.order == "C3"
            assert j.position_jump <= 1e-9
            assert j.theta_jump <= 1e-9
            assert j.d3theta_jump == pytest.approx(1.0 / 3.0, rel=0.1)

    def test_direct_gluing_is_c4(self, cfg):
        curve, rep = rs.extend_separatrix(ExtensionSpec(2, (0.0,)), cfg)
        assert len(rep.junctions) == 1
        j = rep.junctions[0]
        assert j.junction_type == "copy-copy"
        assert j.order == "C4+"
        assert j.d3theta_jump < 1e-2

    def test_multi_piece_layout(self, cfg):
        curve, rep = rs.extend_separatrix(ExtensionSpec(3, (0.5, 0.0)), cfg)
        types = [j.junction_type for j in rep.junctions]
        assert types == ["copy-segment", "segment-copy", "copy-copy"]
        # theta climbs by 2 pi per copy and holds on segments
        assert curve.theta[0] == 0.0
        assert curve.theta[-1] == pytest.approx(6 * math.pi, abs=1e-12)
        assert np.all(np.diff(curve.theta) >= -1e-12)


class TestVerify:
    def test_sphere_tight(self):
        rep = rs.verify_profile(rs.sphere_profile(), 1e-3)
        assert rep.max_curvature_residual <= 1e-8
        assert rep.monotone_violations == 0

    def test_cylinder_exact(self):
        rep = rs.verify_profile(rs.cylinder_profile(3.0, n=301), 1e-3)
        assert rep.max_curvature_residual <= 1e-12
        assert rep.max_speed_residual <= 1e-12

    def test_periodic_budget(self, periodic_setup):
        _, _, prof, _, _ = periodic_setup
        rep = rs.verify_profile(prof, 1e-3)
        assert rep.max_curvature_residual <= 1e-4
        assert rep.monotone_violations == 0

    def test_coarse_step_rejected(self):
        prof = rs.sphere_profile(n=1201)
        with pytest.raises(TooFewSamplesError):
            rs.verify_profile(prof, 0.01)  # sample gap ~3.7e-3

    def test_tiny_span_rejected(self):
        prof = rs.cylinder_profile(0.1, n=5)
        with pytest.raises(TooFewSamplesError):
            rs.verify_profile(prof, 0.012)


class TestReconstructionSweep:
    @pytest.mark.parametrize("lam", [1.1, 1.3, 1.6, 2.2, 2.9, 3.5, 5.0, 8.0])
    def test_unit_norm_across_the_family(self, cfg, lam):
        # the package's whole point: every emitted curve reconstructs
        # k1^2 + k2^2 = 1 from positions alone.  Incomplete heights get a
        # fixed interior window: the cusp coefficient at their contact ends
        # scales like 1/z0, so the difference-quotient collar widens for
        # limits near the axis and the default 10h trim is not uniform.
        from dataclasses import replace

        run_cfg = replace(cfg, theta_targets=(), max_time=8.0)
        back = rs.integrate(PhasePoint(math.pi, lam), "backward", run_cfg)
        full = rs.concat(back, rs.reflect(back, 1))
        prof = rs.build_profile(full)
        trim = None if back.termination.kind == "time_cap" else 0.25
        rep = rs.verify_profile(prof, 1e-3, end_trim=trim)
        assert rep.max_curvature_residual <= 1e-4
        assert rep.monotone_violations == 0


class TestCsv:
    def test_roundtrip_bit_exact(self, cfg):
        prof = rs.build_profile(rs.full_curve(2.0, cfg))
        buf = io.StringIO()
        prof.write_csv(buf)
        buf.seek(0)
        again = ProfileCurve.read_csv(buf)
        assert np.array_equal(again.t, prof.t)
        assert np.array_equal(again.x, prof.x)
        assert np.array_equal(again.z, prof.z)
        assert np.array_equal(again.theta, prof.theta)

    def test_header_validated(self):
        with pytest.raises(ValueError):
            ProfileCurve.read_csv(io.StringIO("a,b,c\n1,2,3\n"))

    def test_z_positivity_enforced(self):
        with pytest.raises(DegenerateProfileError):
            ProfileCurve(np.array([0.0, 1.0]), np.array([0.0, 1.0]),
                         np.array([1.0, 0.0]), np.array([0.0, 0.0]))
