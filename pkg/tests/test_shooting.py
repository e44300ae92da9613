import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conelab.geometry import ConeSpace
from conelab.profiles import s_functional
from conelab.shooting import (OutcomeKind, ShootConfig, ShootingOutcome,
                              barrier_certificate, barrier_roots,
                              barrier_slope, boundary_flux,
                              find_extending_shots, flux_consistency, h_rhs,
                              initial_slope, reconstruct_f, shoot,
                              write_trajectory)

HALF_PI = math.pi / 2


class TestRhs:
    def test_at_origin(self):
        assert h_rhs(0.0, HALF_PI, ConeSpace(2, 0.5)) == pytest.approx(1.0)

    def test_interior_value(self):
        assert h_rhs(math.pi / 4, math.pi / 4, ConeSpace(3, 1.0)) == pytest.approx(1.0)

    def test_ceiling_gives_n_lam(self):
        assert h_rhs(math.pi / 3, HALF_PI, ConeSpace(4, 0.8)) == pytest.approx(
            3.2, abs=1e-12)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            h_rhs(0.0, 0.0, ConeSpace(2, 0.5))
        with pytest.raises(ValueError):
            h_rhs(HALF_PI, 1.0, ConeSpace(2, 0.5))

    def test_exact_at_ceiling_start(self):
        space = ConeSpace(5, 0.83)
        assert h_rhs(0.0, HALF_PI, space) == space.n * space.lam


class TestBarrier:
    def test_slope_values(self):
        assert barrier_slope(ConeSpace(3, 0.95)) == pytest.approx(1.6)
        assert barrier_slope(ConeSpace(2, 1.0)) == pytest.approx(1.0)
        assert barrier_slope(ConeSpace(3, 0.9)) is None

    def test_roots_product(self):
        roots = barrier_roots(ConeSpace(4, 0.9))
        assert roots[0] * roots[1] == pytest.approx(3.0, rel=1e-12)
        assert roots[0] <= roots[1]

    def test_certificate_positive(self):
        cert = barrier_certificate(ConeSpace(3, 0.95), samples=1000)
        assert cert.margin > 0.0
        assert len(cert.thetas) == 1000
        assert np.all(cert.rhs_values - cert.c >= cert.margin)

    def test_certificate_n4(self):
        assert barrier_certificate(ConeSpace(4, 0.87)).margin > 0.0

    def test_degenerate_double_root(self):
        cert = barrier_certificate(ConeSpace(2, 1.0))
        assert cert.margin >= -1e-12

    def test_no_slope_raises(self):
        with pytest.raises(ValueError):
            barrier_certificate(ConeSpace(3, 0.9))

    @given(st.integers(3, 8), st.floats(0.01, 0.3))
    @settings(max_examples=60, deadline=None)
    def test_margin_positive_above_threshold(self, n, excess):
        lam = (2 * math.sqrt(n - 1) + excess) / n
        if lam > 1.0:
            lam = 1.0
        if n * lam - 2 * math.sqrt(n - 1) < 0.01:
            return
        assert barrier_certificate(ConeSpace(n, lam), samples=300).margin > 0.0


class TestBoundaryFlux:
    def test_zero_slope(self):
        assert boundary_flux(0.0, ConeSpace(3, 0.9)) == 0.0

    def test_unit_slope(self):
        assert boundary_flux(-1.0, ConeSpace(3, 1.0)) == pytest.approx(
            1.0 / (3 * math.sqrt(2)))

    def test_infinite_limit(self):
        assert boundary_flux(-math.inf, ConeSpace(4, 0.5)) == 0.25

    def test_positive_slope_rejected(self):
        with pytest.raises(ValueError):
            boundary_flux(0.5, ConeSpace(3, 0.9))

    @given(st.floats(-1e6, 0.0), st.integers(2, 6), st.floats(0.1, 1.0))
    @settings(max_examples=200)
    def test_strictly_below_1_over_n(self, A, n, lam):
        assert boundary_flux(A, ConeSpace(n, lam)) < 1.0 / n


class TestShoot:
    def test_tiny_h0_exits_at_floor_near_origin(self):
        out = shoot(ConeSpace(2, 0.5), 1e-6)
        assert out.kind is OutcomeKind.EXITS_AT_FLOOR
        assert out.theta_exit < 0.01

    def test_ceiling_start_exits_immediately(self):
        out = shoot(ConeSpace(3, 0.95), HALF_PI)
        assert out.kind is OutcomeKind.EXITS_AT_CEILING

    def test_no_extension_above_threshold(self):
        space = ConeSpace(3, 0.95)
        for k in range(1, 21):
            out = shoot(space, k * math.pi / 40)
            assert out.kind is not OutcomeKind.EXTENDS_TO_HALF_PI

    def test_extension_below_threshold(self):
        hits = find_extending_shots(ConeSpace(3, 0.9), count=1)
        assert len(hits) == 1
        H0, out = hits[0]
        assert out.kind is OutcomeKind.EXTENDS_TO_HALF_PI
        assert 0.0 < H0 < HALF_PI
        assert out.f_end > 0.0

    def test_deterministic(self):
        a = shoot(ConeSpace(3, 0.9), 0.7)
        b = shoot(ConeSpace(3, 0.9), 0.7)
        assert a.kind is b.kind
        assert np.array_equal(a.thetas, b.thetas)

    def test_exit_stable_under_tighter_tolerance(self):
        space = ConeSpace(2, 0.5)
        loose = shoot(space, 0.01, ShootConfig(rtol=1e-8, atol=1e-10))
        tight = shoot(space, 0.01, ShootConfig(rtol=1e-11, atol=1e-13))
        assert loose.kind is tight.kind is OutcomeKind.EXITS_AT_FLOOR
        assert abs(loose.theta_exit - tight.theta_exit) < 1e-6

    def test_h0_out_of_range(self):
        with pytest.raises(ValueError):
            shoot(ConeSpace(2, 0.5), 0.0)
        with pytest.raises(ValueError):
            shoot(ConeSpace(2, 0.5), 2.0)


class TestReconstruct:
    def test_synthetic_ceiling_trajectory_gives_constant(self):
        thetas = np.linspace(0.0, HALF_PI - 1e-6, 50)
        out = ShootingOutcome(kind=OutcomeKind.EXTENDS_TO_HALF_PI, thetas=thetas,
                              Hs=np.full_like(thetas, HALF_PI),
                              log_fs=np.zeros_like(thetas),
                              theta_exit=float(thetas[-1]), f_end=1.0)
        f = reconstruct_f(out, ConeSpace(3, 0.9))
        assert f(0.7) == pytest.approx(1.0, abs=1e-9)

    def test_profile_nonincreasing(self):
        hits = find_extending_shots(ConeSpace(3, 0.9), count=1)
        f = reconstruct_f(hits[0][1], ConeSpace(3, 0.9))
        vals = [f(t) for t in np.linspace(0.0, HALF_PI, 50)]
        assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))
        assert f(0.0) == pytest.approx(1.0, abs=1e-9)

    def test_floor_exit_rejected(self):
        out = shoot(ConeSpace(2, 0.5), 0.01)
        assert out.kind is OutcomeKind.EXITS_AT_FLOOR
        with pytest.raises(ValueError):
            reconstruct_f(out, ConeSpace(2, 0.5))


class TestFluxConsistency:
    def test_extending_shot_matches_closed_form(self):
        space = ConeSpace(3, 0.9)
        hits = find_extending_shots(space, count=1)
        H0, out = hits[0]
        area, flux = flux_consistency(space, H0, out)
        assert area == pytest.approx(flux, rel=1e-6)
        assert flux < 1.0 / 3.0

    def test_initial_slope(self):
        space = ConeSpace(3, 0.9)
        assert initial_slope(HALF_PI, space) == pytest.approx(0.0, abs=1e-12)
        assert initial_slope(math.pi / 4, space) == pytest.approx(-0.9)


def test_write_trajectory(tmp_path):
    out = shoot(ConeSpace(3, 0.95), 0.5)
    path = tmp_path / "traj.txt"
    write_trajectory(path, out)
    data = np.loadtxt(path)
    assert data.shape[1] == 3
    assert data[0, 1] == pytest.approx(0.5)
    assert data[0, 2] == pytest.approx(1.0)


def test_shoot_config_validation():
    with pytest.raises(ValueError):
        ShootConfig(h_floor=1e-3, h_switch=1e-4)
    with pytest.raises(ValueError):
        ShootConfig(theta_pad=0.5)
