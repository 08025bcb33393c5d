import math

import numpy as np
import pytest

from tests.conftest import ALPHA, BETA
from wcdelay.core.errors import PreconditionError
from wcdelay.schemas.kernel import DiracKernel, GammaKernel, UniformKernel
from wcdelay.schemas.stability import Cause, DelayIndependence, Verdict
from wcdelay.services.stability import (
    build_boundary,
    classify,
    classify_nondelayed,
    delay_independent_test,
    hopf_curve_point,
    hopf_transversality,
    is_stable,
    line_through_root,
    omega_tau,
    region_scan,
    saddle_node_rate,
    saddle_node_test,
)


class TestDelayIndependent:
    @pytest.mark.parametrize("alpha, beta, verdict", [
        (0.0, 0.0, Verdict.STABLE),
        (2.5, 10.0, Verdict.UNSTABLE),
        (1.5, 0.8, Verdict.STABLE),
        (2.0, 5.0, Verdict.MARGINAL),
    ])
    def test_nondelayed(self, alpha, beta, verdict):
        assert classify_nondelayed(alpha, beta).verdict is verdict

    @pytest.mark.parametrize("alpha, beta, expected", [
        (0.3, -0.4, DelayIndependence.STABLE_FOR_ALL_KERNELS),
        (2.0, 0.5, DelayIndependence.UNSTABLE_FOR_ALL_KERNELS),
        (ALPHA, BETA, DelayIndependence.INDETERMINATE),
    ])
    def test_kernel_free_shortcuts(self, alpha, beta, expected):
        assert delay_independent_test(alpha, beta) is expected

    @pytest.mark.parametrize("alpha, beta, expected", [
        (3.0, 2.0, True),
        (2.0, 1.0, False),
        (0.0, 0.0, False),
    ])
    def test_saddle_node(self, alpha, beta, expected):
        assert saddle_node_test(alpha, beta) is expected

    def test_saddle_node_rate(self):
        assert saddle_node_rate(0.0, 1.0) == pytest.approx(-0.25)
        assert saddle_node_rate(3.0, 0.5) == pytest.approx(1 / 1.5)


class TestOmegaTau:
    def test_dirac(self):
        ot = omega_tau(DiracKernel(), 1.0)
        assert ot.omega_tau == pytest.approx(2.02876, abs=1e-5)
        assert ot.mu_tau == pytest.approx(-2.26183, abs=1e-4)
        assert ot.mu_tau == pytest.approx(1 / math.cos(ot.omega_tau))
        w = ot.omega_tau
        assert abs(w * math.cos(w) + math.sin(w)) < 1e-10

    @pytest.mark.parametrize("tau", [0.01, 1.0, 100.0])
    def test_weak_gamma_has_no_root(self, tau):
        assert omega_tau(GammaKernel(p=1), tau) is None

    @pytest.mark.parametrize("tau", [0.25, 1.0, 3.0])
    def test_strong_gamma_closed_form(self, tau):
        ot = omega_tau(GammaKernel(p=2), tau)
        assert ot.omega_tau == pytest.approx(2 * math.sqrt(1 + tau), abs=1e-9)
        assert ot.mu_tau == pytest.approx(-((2 + tau) ** 2) / tau, abs=1e-9)

    def test_uniform_root_in_range(self):
        kernel = UniformKernel(eps=0.5)
        ot = omega_tau(kernel, 1.0)
        assert math.pi / 2 < ot.omega_tau < math.pi
        assert ot.mu_tau < 0

    def test_root_on_first_sheet(self):
        for kernel in [DiracKernel(), GammaKernel(p=2), GammaKernel(p=3), UniformKernel(eps=0.2)]:
            ot = omega_tau(kernel, 0.7)
            mu, intercept = line_through_root(kernel, 0.7, ot.omega_tau)
            assert mu == pytest.approx(ot.mu_tau)
            assert intercept == pytest.approx(-ot.mu_tau ** 2)


class TestHopfCurve:
    @pytest.mark.parametrize("kernel", [DiracKernel(), GammaKernel(p=1), GammaKernel(p=2), UniformKernel(eps=0.5)])
    def test_starts_at_bogdanov_takens(self, kernel):
        assert hopf_curve_point(kernel, 1.0, 1e-8) == pytest.approx((2.0, 1.0), abs=1e-6)

    def test_dirac_quarter_period(self):
        alpha, beta = hopf_curve_point(DiracKernel(), 1.0, math.pi / 2)
        assert alpha == pytest.approx(-math.pi)
        assert beta == pytest.approx(1 + math.pi ** 2 / 4)

    def test_strong_gamma_endpoint(self):
        point = hopf_curve_point(GammaKernel(p=2), 1.0, 2 * math.sqrt(2))
        assert point == pytest.approx((-18.0, 81.0), abs=1e-8)

    @pytest.mark.parametrize("kernel", [DiracKernel(), GammaKernel(p=2)])
    def test_endpoint_is_double_hopf(self, kernel):
        ot = omega_tau(kernel, 1.0)
        point = hopf_curve_point(kernel, 1.0, ot.omega_tau)
        assert point == pytest.approx((2 * ot.mu_tau, ot.mu_tau ** 2), abs=1e-8)

    @pytest.mark.parametrize("kernel", [DiracKernel(), GammaKernel(p=1), GammaKernel(p=2)])
    def test_transversality(self, kernel):
        ot = omega_tau(kernel, 1.0)
        end = ot.omega_tau if ot else 20.0
        for omega in np.linspace(0.05, 0.95, 20) * end:
            assert hopf_transversality(kernel, 1.0, omega) > 0


class TestBoundary:
    def test_strong_gamma(self):
        boundary = build_boundary(GammaKernel(p=2), 1.0)
        assert boundary.bounded
        assert boundary.bt_point == (2.0, 1.0)
        assert boundary.double_hopf_point == pytest.approx((-18.0, 81.0), abs=1e-8)
        assert boundary.zero_hopf_point == pytest.approx((-8.0, -9.0), abs=1e-8)
        assert boundary.hopf_line_segment == pytest.approx((-18.0, -8.0), abs=1e-8)
        assert boundary.saddle_node_segment == pytest.approx((-8.0, 2.0), abs=1e-8)
        assert boundary.codim2_points()["double_hopf"] == pytest.approx([-18.0, 81.0], abs=1e-8)

    def test_weak_gamma_unbounded(self):
        boundary = build_boundary(GammaKernel(p=1), 1.0)
        assert not boundary.bounded
        assert boundary.bt_point == (2.0, 1.0)
        assert boundary.hopf_line_segment is None
        assert boundary.double_hopf_point is None
        assert boundary.saddle_node_segment[1] == 2.0

    @pytest.mark.parametrize("kernel", [DiracKernel(), GammaKernel(p=2), UniformKernel(eps=0.5)])
    def test_geometry_identities(self, kernel):
        boundary = build_boundary(kernel, 1.0)
        mu = boundary.omega_tau.mu_tau
        last = boundary.hopf_curve_samples[-1, 1:]
        assert tuple(last) == pytest.approx(boundary.double_hopf_point, abs=1e-8)
        assert tuple(boundary.hopf_curve_samples[0, 1:]) == pytest.approx((2.0, 1.0), abs=1e-6)

        za, zb = boundary.zero_hopf_point
        assert zb == pytest.approx(za - 1.0)
        assert zb == pytest.approx(mu * (za - mu))

    def test_arc_tolerance(self):
        boundary = build_boundary(DiracKernel(), 1.0, arc_tol=0.01)
        samples = boundary.hopf_curve_samples
        gaps = np.hypot(np.diff(samples[:, 1]), np.diff(samples[:, 2]))
        assert gaps.max() <= 0.01
        assert np.all(np.diff(samples[:, 0]) > 0)


class TestClassify:
    def test_section3_dirac(self):
        assert classify(DiracKernel(), 0.05, ALPHA, BETA).verdict is Verdict.STABLE
        assert classify(DiracKernel(), 0.07, ALPHA, BETA).verdict is Verdict.UNSTABLE

    def test_section3_weak_gamma_large_delay(self):
        result = classify(GammaKernel(p=1), 100.0, ALPHA, BETA)
        assert result.verdict is Verdict.STABLE
        assert result.cause is Cause.INSIDE_REGION

    def test_weak_gamma_stable_for_all_delays(self):
        for tau in np.geomspace(1e-3, 100.0, 60):
            assert classify(GammaKernel(p=1), tau, ALPHA, BETA).verdict is Verdict.STABLE

    def test_shortcuts(self):
        result = classify(DiracKernel(), 1.0, 0.3, -0.4)
        assert result.cause is Cause.DELAY_INDEPENDENT_STABLE
        result = classify(DiracKernel(), 1.0, 2.5, 0.0)
        assert result.verdict is Verdict.UNSTABLE
        assert result.cause is Cause.DELAY_INDEPENDENT_UNSTABLE

    def test_marginal_on_saddle_node_segment(self):
        result = classify(DiracKernel(), 1.0, 1.0, 0.0)
        assert result.verdict is Verdict.MARGINAL
        assert result.cause is Cause.ON_BOUNDARY
        assert result.distance_to_boundary < 1e-6

    def test_is_stable_agrees_with_classify(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            alpha, beta = rng.uniform(-20, 3), rng.uniform(-5, 60)
            result = classify(GammaKernel(p=2), 0.5, alpha, beta)
            if result.verdict is Verdict.MARGINAL:
                continue
            assert is_stable(GammaKernel(p=2), 0.5, alpha, beta) == (result.verdict is Verdict.STABLE)

    @pytest.mark.parametrize("kernel", [DiracKernel(), GammaKernel(p=2)])
    def test_single_loss_of_stability(self, kernel):
        verdicts = [is_stable(kernel, tau, ALPHA, BETA) for tau in np.linspace(0.005, 1.0, 100)]
        changes = sum(a != b for a, b in zip(verdicts, verdicts[1:]))
        assert verdicts[0] and not verdicts[-1]
        assert changes == 1


class TestRegionScan:
    def test_rhombus_and_unstable_half_plane(self):
        alphas, betas, grid = region_scan(DiracKernel(), 1.0, (-5.0, 3.0), (-3.0, 5.0), (50, 50))
        for i, a in enumerate(alphas):
            for j, b in enumerate(betas):
                cell = grid[i][j]
                if abs(a) + abs(b) < 0.9:
                    assert cell.verdict is Verdict.STABLE
                if b < a - 1.0 - 1e-6:
                    assert cell.verdict is Verdict.UNSTABLE

    def test_deterministic(self):
        first = region_scan(GammaKernel(p=1), 1.0, (-5.0, 3.0), (-3.0, 5.0), (20, 20))[2]
        second = region_scan(GammaKernel(p=1), 1.0, (-5.0, 3.0), (-3.0, 5.0), (20, 20))[2]
        assert first == second

    @pytest.mark.slow
    def test_dirac_region_inside_strong_gamma_region(self):
        window = ((-30.0, 5.0), (-5.0, 100.0), (200, 200))
        _, _, dirac = region_scan(DiracKernel(), 1.0, *window)
        _, _, gamma = region_scan(GammaKernel(p=2), 1.0, *window)
        for row_d, row_g in zip(dirac, gamma):
            for cell_d, cell_g in zip(row_d, row_g):
                if cell_d.verdict is Verdict.STABLE:
                    assert cell_g.verdict is not Verdict.UNSTABLE

    def test_resolution_too_small(self):
        with pytest.raises(PreconditionError):
            region_scan(DiracKernel(), 1.0, (-1.0, 1.0), (-1.0, 1.0), (1, 10))
