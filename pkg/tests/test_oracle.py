"""Independent numeric verification layer."""

import numpy as np
import pytest

from vjp import expr as E
from vjp import jetgeo as G
import vjp.oracle as O
import vjp.varcalc as V
from vjp.errors import MathError
from vjp.jetspace import JetSpaceDescriptor


class TestStencils:
    @pytest.mark.parametrize("deriv", [1, 2, 3, 4])
    def test_weights_exact_on_monomials(self, deriv):
        import math

        w, radius = O.stencil(deriv)
        offsets = np.arange(-radius, radius + 1, dtype=float)
        # moment conditions: k-th moment is factorial(deriv) iff k == deriv
        for k in range(len(offsets)):
            val = float(np.dot(w, offsets**k))
            expected = math.factorial(deriv) if k == deriv else 0.0
            assert abs(val - expected) < 1e-7


class TestSampledSection:
    def test_fd_jets_match_exact(self, mech1):
        sec = G.Section(mech1, "c", [E.parse("t^3", mech1)])
        samp = O.SampledSection(mech1, [(0.0, 1.0)], shape=(256,), section=sec)
        sl = samp.interior_slices(2)
        t = samp.axes[0][sl[0]]
        d2 = samp.jet(1, (1, 1))[sl[0]]
        assert np.max(np.abs(d2 - 6 * t)) < 1e-8

    def test_2d_mixed_jet(self, plane):
        sec = G.Section(plane, "c", [E.parse("x^2*y", plane)])
        samp = O.SampledSection(plane, [(0.0, 1.0), (0.0, 1.0)], shape=(64, 64), section=sec)
        sl = samp.interior_slices(2)
        gx = samp.grid[plane.base_symbol(1)][sl]
        mixed = samp.jet(1, (1, 2))[sl]
        assert np.max(np.abs(mixed - 2 * gx)) < 1e-8


class TestGateaux:
    def test_free_particle(self, mech1):
        lam = V.Lagrangian(mech1, E.parse("1/2*u_t^2", mech1))
        sec = G.Section(mech1, "c", [E.parse("t^2", mech1)])
        samp = O.SampledSection(mech1, [(0.0, 1.0)], section=sec)
        res = O.gateaux_check(lam, samp)
        assert res.residual < 1e-6
        assert not res.grid_warning

    def test_zero_lagrangian(self, mech1):
        lam = V.Lagrangian(mech1, E.ZERO)
        sec = G.Section(mech1, "c", [E.parse("t", mech1)])
        samp = O.SampledSection(mech1, [(0.0, 1.0)], shape=(256,), section=sec)
        assert O.gateaux_check(lam, samp).residual == 0.0

    def test_trivial_lagrangian(self):
        sp = JetSpaceDescriptor(["x"], ["u"], 1)
        lam = V.Lagrangian(sp, E.parse("u*u_x", sp))
        sec = G.Section(sp, "c", [E.parse("x^2 - x", sp)])
        samp = O.SampledSection(sp, [(0.0, 1.0)], shape=(512,), section=sec)
        res = O.gateaux_check(lam, samp)
        assert res.residual < 1e-6
        assert abs(res.action_derivative) < 1e-6  # E = 0 on trivial Lagrangians


class TestConservation:
    def test_free_particle_currents(self, mech1):
        eta = V.euler_lagrange(V.Lagrangian(mech1, E.parse("1/2*u_t^2", mech1)))
        for text in ("u_t", "-1/2*u_t^2"):
            res = O.conservation_check(
                E.parse(text, mech1), eta, [0.3], [1.7], t1=10.0, step=1e-3
            )
            assert res.drift < 1e-8
        bad = O.conservation_check(
            E.parse("u", mech1), eta, [0.3], [1.7], t1=10.0, step=1e-3
        )
        assert bad.drift > 1.0

    def test_monopole_angular_momentum(self, mech2):
        L = E.parse(
            "2*(u_t^2 + v_t^2)/(1+u^2+v^2)^2 + 2*(u*v_t - v*u_t)/(1+u^2+v^2)",
            mech2,
        )
        eta = V.euler_lagrange(V.Lagrangian(mech2, L))
        # the glued rotation current from the homotopy machinery
        current = E.parse(
            "(-2*(u^2+v^2)^2 - 2*(u^2+v^2) + 4*u_t*v - 4*u*v_t)/(1+u^2+v^2)^2",
            mech2,
        )
        res = O.conservation_check(
            current, eta, [0.5, 0.0], [0.0, 0.4], t1=5.0, step=1e-3
        )
        assert res.drift < 1e-7

    def test_requires_one_dimensional_base(self, plane):
        eta = V.euler_lagrange(
            V.Lagrangian(plane, E.parse("1/2*(u_x^2+u_y^2)", plane))
        )
        with pytest.raises(MathError):
            O.conservation_check(E.parse("u", plane), eta, [0.1], [0.0])


class TestCrosscheck:
    def test_noether_identity_sides(self, mech1):
        lam = V.Lagrangian(mech1, E.parse("1/2*u_t^2", mech1))
        xi = G.ProjectableVectorField(mech1, [E.ZERO], [E.parse("t", mech1)])
        lie, eps = V.lie_derivative_lagrangian(xi, lam)
        eta = V.euler_lagrange(lam)
        lhs = lie.top_coefficient
        rhs = (
            eta.contract(xi.vertical_components()).top_coefficient
            + G.dH(eps).top_coefficient
        )
        assert O.symbolic_numeric_crosscheck(lhs, rhs).passed

    def test_broken_identity_fails(self, mech1):
        lhs = E.parse("u*u_t", mech1)
        rhs = E.parse("-u*u_t", mech1)
        assert not O.symbolic_numeric_crosscheck(lhs, rhs).passed

    def test_zero_vs_zero(self):
        assert O.symbolic_numeric_crosscheck(E.ZERO, E.ZERO).passed


class TestConvergenceScaling:
    def test_fd_jets_fourth_order_in_h(self, mech1):
        # non-polynomial section: truncation dominates and scales like h^4
        sec = G.Section(mech1, "c", [E.parse("sin(t)", mech1)])
        errs = []
        for N in (65, 129):
            samp = O.SampledSection(
                mech1, [(0.0, 3.0)], shape=(N,), section=sec, jet_stride=1
            )
            sl = samp.interior_slices(2)[0]
            t = samp.axes[0][sl]
            got = samp.jet(1, (1, 1))[sl]
            errs.append(np.max(np.abs(got + np.sin(t))))
        ratio = errs[0] / errs[1]
        assert 10 < ratio < 26, (errs, ratio)

    def test_rk4_drift_fourth_order_in_step(self, mech2):
        # nonlinear system with an exactly conserved quantity: the drift of
        # the certified current scales like step^4
        L = E.parse(
            "2*(u_t^2 + v_t^2)/(1+u^2+v^2)^2 + 2*(u*v_t - v*u_t)/(1+u^2+v^2)",
            mech2,
        )
        eta = V.euler_lagrange(V.Lagrangian(mech2, L))
        current = E.parse(
            "(-2*(u^2+v^2)^2 - 2*(u^2+v^2) + 4*u_t*v - 4*u*v_t)/(1+u^2+v^2)^2",
            mech2,
        )
        drifts = []
        for step in (2e-2, 1e-2):
            res = O.conservation_check(
                current, eta, [0.5, 0.1], [0.2, 0.4], t1=2.0, step=step,
                sample_every=5,
            )
            drifts.append(res.drift)
        ratio = drifts[0] / drifts[1]
        assert 8 < ratio < 32, (drifts, ratio)
