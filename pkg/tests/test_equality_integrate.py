"""Probabilistic equality and exact homotopy-parameter integration."""

from fractions import Fraction

import pytest

from vjp import expr as E
from vjp.errors import NonPolynomialInT, UndecidableEquality
from vjp.jetspace import HOMOTOPY, JetSpaceDescriptor

SP = JetSpaceDescriptor(["x", "y"], ["u", "v"], 2)


def p(text, max_order=2):
    return E.parse(text, SP, max_order=max_order)


class TestEquals:
    def test_canonical_path(self):
        r = E.equals(p("u_{xy}"), p("u_{yx}"))
        assert r and r.decided_by == "canonical"

    def test_derivative_identity_canonical(self):
        # D-expanded (u^2)_x / 2 vs u*u_x
        lhs = E.scale(p("2*u*u_x"), Fraction(1, 2))
        assert E.equals(lhs, p("u*u_x")).decided_by == "canonical"

    def test_sampled_inequality(self):
        r = E.equals(p("u_x"), p("u_y"))
        assert not r and r.decided_by == "sampled"

    def test_sampled_equality_of_trig_identity(self):
        # sin(2u) = 2 sin u cos u is outside the canonical rewrite set
        lhs = p("sin(2*u)")
        rhs = p("2*sin(u)*cos(u)")
        r = E.equals(lhs, rhs)
        assert r and r.decided_by == "sampled"

    def test_undecidable(self):
        # overflows at every point of the sampling domain [-2,-0.1] u [0.1,2]
        bad = p("exp(exp((5/u)^2))")
        with pytest.raises(UndecidableEquality):
            E.is_zero_sampled(bad)


class TestIntegrateT:
    def test_power_rule(self):
        assert (
            E.integrate_t(p("@t^2*u*u_{xx}")) - E.scale(p("u*u_{xx}"), Fraction(1, 3))
        ).is_zero()

    def test_constant(self):
        assert (E.integrate_t(p("7")) - p("7")).is_zero()

    def test_no_t_left(self):
        out = E.integrate_t(p("@t*u + v"))
        assert HOMOTOPY not in out.free_symbols()

    def test_non_polynomial_error(self):
        with pytest.raises(NonPolynomialInT):
            E.integrate_t(p("sin(@t*u)"))

    def test_even_power_rational_error(self):
        with pytest.raises(NonPolynomialInT):
            E.integrate_t(p("1/(1 + @t^2*(u^2))"))

    def test_rational_class(self):
        got = E.integrate_t(p("@t/(1 + @t^2*(u^2+v^2))^2"))
        want = p("1/(2*(1+u^2+v^2))")
        # difference of the two rationals must cancel exactly
        assert E.equals(got, want).decided_by == "canonical"

    def test_rational_cubic(self):
        got = E.integrate_t(p("@t^3/(1 + @t^2*(u^2))^3"))
        want = p("1/(4*(1+u^2)^2)")
        assert (got - want).is_zero()

    def test_linearity(self):
        a, b = p("@t^2*u"), p("@t*v_x")
        lhs = E.integrate_t(a + E.scale(b, Fraction(3)))
        rhs = E.integrate_t(a) + E.scale(E.integrate_t(b), Fraction(3))
        assert (lhs - rhs).is_zero()

    def test_commutes_with_foreign_partial(self):
        u = SP.field_symbol(1)
        e = p("@t^3*u^2*v + @t*u")
        lhs = E.partial(E.integrate_t(e), u)
        rhs = E.integrate_t(E.partial(e, u))
        assert (lhs - rhs).is_zero()


class TestNquad:
    def test_constant(self):
        import numpy as np

        val, err = E.nquad(lambda pts: np.ones(pts.shape[0]), 2)
        assert abs(val - 1.0) < 1e-12

    def test_sine_symmetry(self):
        import numpy as np

        val, _ = E.nquad(lambda pts: np.sin(2 * np.pi * pts[:, 0]), 1)
        assert abs(val) < 1e-6

    def test_sphere_area(self):
        # standard area form of the unit sphere in spherical coordinates:
        # integral over [0,pi]x[0,2pi] of sin(theta) equals 4*pi
        import numpy as np

        def f(pts):
            theta = np.pi * pts[:, 0]
            return np.sin(theta) * np.pi * 2 * np.pi

        val, _ = E.nquad(f, 2)
        assert abs(val - 4 * np.pi) < 1e-6

    def test_polynomial_exactness(self):
        import numpy as np

        # degree <= 2*nodes-1 exact: degree-7 polynomial already at 4 nodes
        val, _ = E.nquad(lambda pts: pts[:, 0] ** 7, 1, nodes=4, tau=1e-13, node_cap=8)
        assert abs(val - 1.0 / 8) < 1e-14

    def test_nonconvergence(self):
        import numpy as np
        from vjp.errors import QuadratureNonConvergence

        rng = np.random.default_rng(0)

        def noisy(pts):
            return rng.normal(size=pts.shape[0])

        with pytest.raises(QuadratureNonConvergence):
            E.nquad(noisy, 1, tau=1e-14, node_cap=32)
