"""Oscillatory integrals: regularization, partition of unity, integration
by parts with the exact transpose operator."""
import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from fiolab.oscillatory import (ConvergenceError, CutoffKind, CutoffSpec,
                                IBPOperator, OutsideDomainError, chi,
                                chi_derivative, chi_expr, choose_eps0,
                                fio_apply_ibp, ibp_operator, omega_partition,
                                regularized_fio_apply)
from fiolab.phases import GeneratingFunction, special_phase

A_ONE = "1"
F_GAUSS = "exp(-y**2/2)"


class TestChi:
    def test_plateau_and_support(self):
        assert float(chi(0.5)) == 1.0
        assert float(chi(1.0)) == 1.0
        assert float(chi(2.0)) == 0.0
        assert float(chi(3.0)) == 0.0

    def test_midpoint(self):
        assert float(chi(1.5)) == pytest.approx(0.5)
        assert float(chi_derivative(1.5, 1)) == pytest.approx(-2.0)

    def test_monotone_nonincreasing(self):
        t = np.linspace(0.0, 3.0, 301)
        v = chi(t)
        assert np.all(np.diff(v) <= 1e-12)

    def test_derivatives_vanish_at_junctions(self):
        # C-infinity matching: every derivative tends to 0 at t = 1 and t = 2
        for m in (1, 2, 3):
            assert abs(float(chi_derivative(1.0 + 1e-9, m))) < 1e-3
            assert abs(float(chi_derivative(2.0 - 1e-9, m))) < 1e-3

    def test_symbolic_expression_matches(self):
        t = sp.Symbol("t", real=True)
        e = chi_expr(t)
        for val in (0.3, 1.2, 1.7, 2.5):
            assert float(e.subs(t, val)) == pytest.approx(float(chi(val)),
                                                          abs=1e-12)

    @given(st.floats(1.0 + 1e-6, 2.0 - 1e-6))
    @settings(max_examples=40, deadline=None)
    def test_range_in_unit_interval(self, t):
        v = float(chi(t))
        assert 0.0 <= v <= 1.0


class TestCutoffSpec:
    def test_gaussian_radius_covers_tail(self):
        # e^{-r^2/(2 sigma^2)} <= tail at the reported radius
        spec = CutoffSpec(CutoffKind.GAUSSIAN)
        r = spec.radius(4.0, tail=1e-14)
        assert np.exp(-r ** 2 / (2 * 16.0)) <= 1e-14 * (1 + 1e-9)

    def test_bump_radius_is_support_edge(self):
        spec = CutoffSpec(CutoffKind.SMOOTH_BUMP)
        assert spec.radius(4.0) == pytest.approx(8.0)


class TestRegularizedApply:
    """F = identity when S = x*theta and a = 1: the limit must return f(x)."""

    def test_identity_at_origin(self, phi_xt):
        res = regularized_fio_apply(A_ONE, phi_xt, F_GAUSS, 0.0)
        assert abs(res.value - 1.0) < 5e-4
        # the residual sequence must certify the limit it reports
        _, last = res.sigma_residuals[-1]
        assert abs(res.value - 1.0) < 10 * max(last, 1e-12)

    def test_identity_off_origin(self, phi_xt):
        res = regularized_fio_apply(A_ONE, phi_xt, F_GAUSS, 1.0,
                                    schedule=(16, 32, 64, 128, 256))
        assert abs(res.value - np.exp(-0.5)) < 1e-5

    def test_cutoff_gap_reported(self, phi_xt):
        res = regularized_fio_apply(A_ONE, phi_xt, F_GAUSS, 0.0)
        assert res.cutoff_gap is not None
        assert res.cutoff_gap < 1e-3

    def test_limit_independent_of_cutoff_shape(self, phi_xt):
        kwargs = dict(schedule=(16, 32, 64, 128, 256), compute_gap=False)
        g = regularized_fio_apply(A_ONE, phi_xt, F_GAUSS, 0.0, **kwargs)
        b = regularized_fio_apply(A_ONE, phi_xt, F_GAUSS, 0.0,
                                  cutoff=CutoffSpec(CutoffKind.SMOOTH_BUMP),
                                  **kwargs)
        assert abs(g.value - b.value) < 1e-8

    def test_residuals_recorded_per_sigma(self, phi_xt):
        res = regularized_fio_apply(A_ONE, phi_xt, F_GAUSS, 0.0)
        sigmas = [s for s, _ in res.sigma_residuals]
        assert sigmas == sorted(sigmas) and len(sigmas) >= 3

    def test_divergent_schedule_raises(self, phi_xt):
        # a two-entry schedule cannot certify convergence monotonically if the
        # residuals grow; force that with a tiny truncation radius
        with pytest.raises(ConvergenceError):
            regularized_fio_apply("theta**2", phi_xt, F_GAUSS, 0.0,
                                  schedule=(0.5, 1, 2), y_radius=1.0,
                                  compute_gap=False)


class TestOmegaPartition:
    def test_critical_set_value_one(self, phi_xt):
        assert omega_partition(phi_xt, 0.5, [(1.0, 1.0, 0.0)])[0] == 1.0

    def test_elliptic_point_value_zero(self, phi_xt):
        # D = 4, lambda^2 = 5, quot = 4 / (0.4 * 5) = 2 -> chi = 0
        assert omega_partition(phi_xt, 0.4, [(0.0, 2.0, 0.0)])[0] == 0.0

    def test_transition_value(self, phi_xt):
        eps = 2.0 / (3.0 * 1.5)
        assert omega_partition(phi_xt, eps,
                               [(0.0, 1.0, 1.0)])[0] == pytest.approx(0.5)

    def test_values_partition_range(self, phi_xt, rng):
        pts = rng.uniform(-5, 5, (200, 3))
        w = omega_partition(phi_xt, 0.4, pts)
        assert np.all((0.0 <= w) & (w <= 1.0))


class TestIBPOperator:
    def test_choose_eps0(self, phi_xt):
        assert choose_eps0(phi_xt) == pytest.approx(0.4)

    def test_coefficient_value(self, phi_xt):
        op = IBPOperator(phi_xt, 0.4)
        # at (0, 1, 1): grad_y phi = -1, D = 2, F = -(-1)/(2i) = -i/2
        assert op.F(np.array([[0.0, 1.0, 1.0]]))[0] == pytest.approx(-0.5j)

    def test_identity_residual_zero_on_domain(self, phi_xt, rng):
        op = ibp_operator(phi_xt, 0.4)
        pts = rng.uniform(-4, 4, (400, 3))
        inside = pts[omega_partition(phi_xt, 0.4, pts) == 0.0][:100]
        assert len(inside) >= 50
        assert op.identity_residual(inside) == 0.0

    def test_guard_rejects_critical_points(self, phi_xt):
        op = IBPOperator(phi_xt, 0.4)
        with pytest.raises(OutsideDomainError):
            op.F(np.array([[1.0, 1.0, 0.0]]))

    def test_coefficient_decay(self, phi_xt):
        # at x = y = 0 the coefficient F = theta/(i D) = 1/(i theta): the
        # 1/lambda decay demanded of the coefficients is exact here
        op = IBPOperator(phi_xt, 0.4)
        thetas = np.array([4.0, 8.0, 16.0, 32.0])
        pts = np.stack([np.zeros(4), np.zeros(4), thetas], axis=-1)
        mags = np.abs(op.F(pts))
        assert np.allclose(mags, 1.0 / thetas, rtol=1e-12)

    def test_transpose_integrates_to_zero(self, phi_xt):
        # tL(g) is a pure divergence, so its integral over the plane vanishes
        # for rapidly decaying g — the defining property of the transpose
        y, t = phi_xt.yvars[0], phi_xt.tvars[0]
        g = sp.exp(-(y - 3) ** 2 - (t - 3) ** 2)
        tl = IBPOperator(phi_xt, 0.4).apply_transpose(g, k=1)
        fn = sp.lambdify((phi_xt.xvars[0], y, t), tl, "numpy")
        # integrate over a box covering supp g but clear of the critical
        # point (y = x, theta = 0); x = -5 keeps it outside the box
        ax = np.linspace(-3.0, 9.0, 961)
        yy, tt = np.meshgrid(ax, ax, indexing="ij")
        h = ax[1] - ax[0]
        total = np.sum(fn(-5.0, yy, tt)) * h * h
        assert abs(total) < 1e-8

    def test_invalid_eps0(self, phi_xt):
        with pytest.raises(ValueError):
            IBPOperator(phi_xt, 0.0)


class TestFioApplyIBP:
    def test_k0_matches_regularized(self, phi_xt):
        direct = fio_apply_ibp(A_ONE, phi_xt, F_GAUSS, 0.0, k=0, R=12.0)
        reg = regularized_fio_apply(A_ONE, phi_xt, F_GAUSS, 0.0)
        assert abs(direct.value - reg.value) < 1e-5

    def test_k2_absolutely_convergent_value(self, phi_xt):
        res = fio_apply_ibp(A_ONE, phi_xt, F_GAUSS, 0.0, k=2, R=12.0)
        assert abs(res.value - 1.0) < 1e-6
        assert res.ibp_order == 2

    def test_tail_mass_decreases_with_k(self, phi_xt):
        t0 = fio_apply_ibp(A_ONE, phi_xt, F_GAUSS, 0.0, k=0, R=12.0).tail_mass
        t2 = fio_apply_ibp(A_ONE, phi_xt, F_GAUSS, 0.0, k=2, R=12.0).tail_mass
        assert t2 < 0.05 * t0

    def test_truncation_radius_reported(self, phi_xt):
        res = fio_apply_ibp(A_ONE, phi_xt, F_GAUSS, 0.0, k=0, R=8.0)
        assert res.truncation_radius == 8.0
