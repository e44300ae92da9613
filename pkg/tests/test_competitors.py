import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conelab.competitors import (CatenoidParams, ExpCompetitor,
                                 catenoid_area_closed_form, catenoid_profile,
                                 catenoid_residuals, check_length_profile,
                                 competitor_search, disk_profile, exp_profile,
                                 exp_profile_area, exp_profile_bound,
                                 exp_profile_log_margin, exp_profile_margin,
                                 solve_catenoid)
from conelab.geometry import ConeSpace
from conelab.profiles import LengthProfile, graph_area, s_functional

HALF_PI = math.pi / 2
L0 = 2 * math.pi


class TestCatenoid:
    def test_solve_small_delta(self):
        p = solve_catenoid(0.01, 0.5)
        r1, r2 = catenoid_residuals(p.a, p.b, 0.01, 0.5)
        assert max(abs(r1), abs(r2)) < 1e-12
        assert p.a == pytest.approx(0.00721, abs=5e-5)
        assert p.b > 0.0

    def test_neck_asymptote(self):
        target = 0.5 / math.log(2)  # alpha / (-ln alpha)
        for delta in (1e-2, 3e-3, 1e-3):
            p = solve_catenoid(delta, 0.5)
            assert p.a / delta == pytest.approx(target, rel=2e-3)
        assert solve_catenoid(1e-3, 0.5).a / 1e-3 == pytest.approx(target, rel=1e-2)

    def test_invariants_enforced(self):
        with pytest.raises(ValueError):
            CatenoidParams(delta=0.01, alpha=0.5, a=0.01, b=0.01)

    def test_input_validation(self):
        with pytest.raises(ValueError):
            solve_catenoid(1.0, 0.5)
        with pytest.raises(ValueError):
            solve_catenoid(0.01, 1.5)

    def test_closed_form_vs_quadrature(self):
        p = solve_catenoid(0.01, 0.5)
        closed = catenoid_area_closed_form(p, L0)
        quad = graph_area(catenoid_profile(p), LengthProfile.round_sphere())
        assert quad == pytest.approx(closed, rel=1e-8)

    def test_degenerate_neck_limit(self):
        # as a -> 0 the closed form collapses to the annulus value
        delta, alpha = 0.05, 0.5
        areas = []
        for d_small in (1e-3, 1e-4):
            p = solve_catenoid(d_small, alpha)
            # shrink a by shrinking the junction angle; compare the formula's
            # a -> 0 limit with fixed (delta, alpha) analytically instead
            areas.append(p.a)
        limit = 0.5 * L0 * (1 - alpha**2 * math.cos(delta) ** 2)
        explicit = 0.5 * L0 * (math.sqrt(1 - 0.0)
                               - alpha**2 * math.cos(delta)
                               * math.cos(delta + math.asin(0.0)))
        assert explicit == pytest.approx(limit)

    def test_expansion_coefficient(self):
        # quadratic coefficient of the area defect in the junction angle
        alpha = 0.5
        target = alpha**2 * (1 + 1 / (-math.log(alpha)))
        coefs = {}
        for delta in (1e-2, 3e-3, 1e-3):
            p = solve_catenoid(delta, alpha)
            area = catenoid_area_closed_form(p, L0)
            coefs[delta] = (area * 2 / L0 - (1 - alpha**2)) / delta**2
        # linear-in-delta Richardson step from the two smallest angles
        d1, d2 = 3e-3, 1e-3
        extrap = (coefs[d2] * d1 - coefs[d1] * d2) / (d1 - d2)
        assert extrap == pytest.approx(target, rel=0.02)

    def test_profile_endpoints(self):
        p = solve_catenoid(0.01, 0.5)
        f = catenoid_profile(p)
        assert f(0.0) == pytest.approx(1.0, abs=1e-12)
        assert f(0.01) * math.cos(0.01) == pytest.approx(
            p.a * math.cosh((f(0.01) * math.sin(0.01) - p.b) / p.a), abs=1e-12)


class TestDisk:
    def test_round_sphere_closed_form(self):
        delta, alpha = 0.1, 0.5
        profile, area = disk_profile(delta, alpha, LengthProfile.round_sphere())
        assert area == pytest.approx(0.5 * L0 * alpha**2 * math.cos(delta) ** 2,
                                     abs=1e-10)
        assert profile(HALF_PI) == pytest.approx(alpha * math.sin(delta), rel=1e-9)

    def test_round_sphere_example_value(self):
        _, area = disk_profile(0.1, 0.5, LengthProfile.round_sphere())
        assert area == pytest.approx(math.pi * 0.25 * math.cos(0.1) ** 2, abs=1e-10)

    def test_quadrature_matches_closed_form(self):
        profile, area = disk_profile(0.1, 0.5, LengthProfile.round_sphere())
        quad = graph_area(profile, LengthProfile.round_sphere())
        assert quad == pytest.approx(area, abs=1e-10)

    def test_quadratic_defect_bound(self):
        # area <= L0/2 (alpha^2 - (L0/F)^2 alpha^2 delta^2) + o(delta^2);
        # round sphere has F = L0 so the coefficient is alpha^2
        alpha = 0.5
        for delta in (0.05, 0.01):
            _, area = disk_profile(delta, alpha, LengthProfile.round_sphere())
            bound = 0.5 * L0 * (alpha**2 - alpha**2 * delta**2) \
                + 0.5 * L0 * alpha**2 * delta**4
            assert area <= bound

    def test_tabulated_length_profile(self):
        ts = np.linspace(0.0, HALF_PI, 400)
        L = LengthProfile.from_table(ts, L0 * np.cos(ts))
        _, area = disk_profile(0.1, 0.5, L)
        assert area == pytest.approx(0.5 * L0 * 0.25 * math.cos(0.1) ** 2, abs=1e-6)

    def test_inadmissible_table_rejected(self):
        # constant L violates L^2 + F^2 <= L0^2 away from 0
        ts = np.linspace(0.0, HALF_PI, 50)
        L = LengthProfile.from_table(ts, np.full_like(ts, 1.0))
        with pytest.raises(ValueError):
            check_length_profile(L)
        with pytest.raises(ValueError):
            disk_profile(0.1, 0.5, L)

    def test_junction_outside_domain(self):
        with pytest.raises(ValueError):
            disk_profile(2.0, 0.5, LengthProfile.round_sphere())


class TestExpBound:
    def test_threshold_example_narrow_junction(self):
        bound = exp_profile_bound(ConeSpace(2, 0.9), 0.001, 0.5)
        assert bound == pytest.approx(0.4999998, abs=1e-7)
        assert bound < 0.5
        assert 0.5 - bound == pytest.approx(1.8e-7, rel=0.05)

    def test_threshold_example_wide_junction(self):
        bound = exp_profile_bound(ConeSpace(2, 0.9), 0.05, 0.5)
        assert bound == pytest.approx(0.50022, abs=1e-5)
        assert bound > 0.5

    def test_continuous_in_alpha(self):
        space = ConeSpace(3, 0.8)
        alphas = np.linspace(0.05, 0.95, 200)
        vals = [exp_profile_bound(space, 0.01, a) for a in alphas]
        jumps = np.abs(np.diff(vals))
        assert np.max(jumps) < 0.01

    def test_margin_agrees_with_bound(self):
        space = ConeSpace(2, 0.9)
        for delta, alpha in [(0.001, 0.5), (0.01, 0.3), (0.1, 0.7)]:
            assert exp_profile_margin(space, delta, alpha) == pytest.approx(
                0.5 - exp_profile_bound(space, delta, alpha), abs=1e-14)

    def test_log_margin_sign_matches(self):
        space = ConeSpace(2, 0.9)
        for delta, alpha in [(0.001, 0.5), (0.05, 0.5)]:
            gap = exp_profile_log_margin(space, math.log(delta), alpha)
            assert (gap > 0) == (exp_profile_margin(space, delta, alpha) > 0)

    @given(st.floats(0.05, 0.95), st.floats(-30.0, -1.5))
    @settings(max_examples=200)
    def test_no_false_positive_at_threshold(self, alpha, log_delta):
        # exactly on the threshold the bound never drops below 1/n
        for n in (2, 3, 5):
            lam = 2 * math.sqrt(n - 1) / n
            space = ConeSpace(n, lam)
            assert exp_profile_log_margin(space, log_delta, alpha) < 0.0


class TestExpArea:
    def test_numeric_below_bound(self):
        space = ConeSpace(2, 0.9)
        numeric = exp_profile_area(space, 0.001, 0.5)
        assert numeric <= exp_profile_bound(space, 0.001, 0.5) + 1e-9
        assert numeric <= 0.4999998 + 1e-9

    def test_matches_assembled_profile(self):
        for n, lam, delta, alpha in [(2, 0.9, 0.001, 0.5), (3, 0.9, 0.01, 0.3)]:
            space = ConeSpace(n, lam)
            direct = exp_profile_area(space, delta, alpha)
            via_functional = s_functional(exp_profile(space, delta, alpha), space)
            assert direct == pytest.approx(via_functional, abs=1e-11)

    def test_junction_continuity(self):
        f = exp_profile(ConeSpace(3, 0.9), 0.01, 0.3)
        assert abs(f(0.01 - 1e-13) - f(0.01 + 1e-13)) < 1e-11
        assert f.breakpoints == (0.01,)

    def test_mu_continuity_exact(self):
        comp = ExpCompetitor(space=ConeSpace(3, 0.9), delta=0.02, alpha=0.4)
        assert math.exp(-comp.mu * comp.delta) == pytest.approx(0.4, abs=1e-15)

    def test_below_one_third_somewhere_under_threshold(self):
        space = ConeSpace(3, 0.9)
        vals = [exp_profile_area(space, d, a)
                for d in np.exp(np.linspace(math.log(1e-11), math.log(0.1), 10))
                for a in (0.2, 0.4, 0.6)]
        assert min(vals) < 1.0 / 3.0

    def test_all_above_one_third_over_threshold(self):
        space = ConeSpace(3, 0.95)
        vals = [exp_profile_area(space, d, a)
                for d in np.exp(np.linspace(math.log(1e-4), math.log(0.5), 6))
                for a in (0.1, 0.3, 0.5, 0.7, 0.9)]
        assert min(vals) >= 1.0 / 3.0 - 1e-9


class TestSearch:
    def test_finds_competitor_below_threshold_n2(self):
        res = competitor_search(ConeSpace(2, 0.9))
        assert res.found and res.bound < 0.5

    def test_none_found_above_threshold_n5(self):
        res = competitor_search(ConeSpace(5, 0.81))
        assert not res.found

    def test_finds_below_threshold_n5(self):
        res = competitor_search(ConeSpace(5, 0.79))
        assert res.found and res.margin > 0.0

    def test_budget_respected(self):
        res = competitor_search(ConeSpace(2, 0.9), budget=100)
        assert res.evaluations <= 200  # one grid pass may finish the round

    def test_monotone_threshold_crossing(self):
        # found-flag flips once along a lambda sweep at fixed n
        n = 4
        lams = np.linspace(0.82, 0.91, 50)
        flags = [competitor_search(ConeSpace(n, float(l))).found for l in lams]
        switches = sum(1 for a, b in zip(flags, flags[1:]) if a != b)
        assert switches == 1
        assert flags[0] and not flags[-1]
