"""Atlas transitions, presentations, coboundaries, cycles, and classes."""

import math
from fractions import Fraction

import pytest

from vjp import expr as E
from vjp import jetgeo as G
import vjp.varcalc as V
from vjp.cech import (
    Atlas,
    Chart,
    Cycle,
    CycleLeg,
    FaceMatch,
    Overlap,
    Representative,
    build_presentation,
    cech_coboundary,
    delta_class,
    delta_prime_class,
    isomorphism_hypothesis_check,
    source_projection,
)
from vjp.cech.presentation import cech_coboundary_one, cech_coboundary_zero
from vjp.errors import CocycleError, CycleNotClosed, InconsistentSourceForm
from vjp.jetspace import JetSpaceDescriptor


@pytest.fixture
def sphere_atlas(mech2):
    sp = mech2
    t, u, v = sp.base_symbol(1), sp.field_symbol(1), sp.field_symbol(2)
    inv = {
        t: E.from_symbol(t),
        u: E.parse("u/(u^2+v^2)", sp),
        v: E.parse("-v/(u^2+v^2)", sp),
    }
    return Atlas(
        sp,
        [Chart("N", sp), Chart("S", sp)],
        [Overlap(sp, "N", "S", inv), Overlap(sp, "S", "N", inv)],
    )


@pytest.fixture
def monopole(mech2, sphere_atlas):
    L = E.parse(
        "2*(u_t^2 + v_t^2)/(1+u^2+v^2)^2 + 2*(u*v_t - v*u_t)/(1+u^2+v^2)", mech2
    )
    lam = V.Lagrangian(mech2, L)
    eta = V.euler_lagrange(lam)
    return {"lagrangian": lam, "eta": {"N": eta, "S": eta}, "atlas": sphere_atlas}


class TestAtlas:
    def test_inverse_and_cocycle_pass(self, sphere_atlas):
        sphere_atlas.verify()

    def test_bad_inverse_detected(self, mech2):
        sp = mech2
        t, u, v = sp.base_symbol(1), sp.field_symbol(1), sp.field_symbol(2)
        fwd = {t: E.from_symbol(t), u: E.parse("u + 1", sp), v: E.from_symbol(v)}
        bwd = {t: E.from_symbol(t), u: E.parse("u + 1", sp), v: E.from_symbol(v)}
        with pytest.raises(CocycleError):
            Atlas(
                sp,
                [Chart("A", sp), Chart("B", sp)],
                [Overlap(sp, "A", "B", fwd), Overlap(sp, "B", "A", bwd)],
            )

    def test_affine_base_transition_pullbacks(self, plane2):
        sp = plane2
        x, y = sp.base_symbol(1), sp.base_symbol(2)
        u, v = sp.field_symbol(1), sp.field_symbol(2)
        fwd = {
            x: E.parse("2*x + y", sp),
            y: E.parse("x - y", sp),
            u: E.parse("u + x", sp),
            v: E.from_symbol(v),
        }
        # inverse of the affine base map
        bwd = {
            x: E.parse("(x + y)/3", sp),
            y: E.parse("(x - 2*y)/3", sp),
            u: E.parse("u - (x + y)/3", sp),
            v: E.from_symbol(v),
        }
        atlas = Atlas(
            sp,
            [Chart("A", sp), Chart("B", sp)],
            [Overlap(sp, "A", "B", fwd), Overlap(sp, "B", "A", bwd)],
        )
        ov = atlas.overlap("A", "B")
        # dH commutes with the pullback of horizontal forms
        f = G.HorizontalForm(sp, 0, {(): E.parse("u*v_x + y", sp)})
        lhs = ov.pull_horizontal(G.dH(f))
        rhs = G.dH(ov.pull_horizontal(f))
        assert all(
            (lhs.coefficient(s) - rhs.coefficient(s)).is_zero()
            for s in [(1,), (2,)]
        )
        # Euler-Lagrange output transforms as a source form
        lam = V.Lagrangian(sp, E.parse("1/2*(u_x^2 + v_y^2) + u*v", sp))
        eta = V.euler_lagrange(lam)
        pulled_lam = V.Lagrangian(sp, ov.pull_horizontal(lam.as_form()).top_coefficient)
        lhs_eta = V.euler_lagrange(pulled_lam)
        rhs_eta = ov.pull_source(eta)
        for a in range(2):
            assert E.equals(lhs_eta.components[a], rhs_eta.components[a])

    def test_field_compatibility(self, sphere_atlas, mech2):
        sp = mech2
        xiN = G.ProjectableVectorField(sp, [E.ZERO], [E.parse("-v", sp), E.parse("u", sp)])
        xiS = G.ProjectableVectorField(sp, [E.ZERO], [E.parse("v", sp), E.parse("-u", sp)])
        ov = sphere_atlas.overlap("N", "S")
        assert ov.check_field_compatibility(xiN, xiS)
        assert not ov.check_field_compatibility(xiN, xiN)


class TestPresentation:
    def test_monopole_presentation(self, monopole):
        pres = build_presentation(monopole["eta"], monopole["atlas"])
        sp = monopole["atlas"].space
        mu = pres.mu[("N", "S")]
        assert not pres.glues_globally()
        # the Tonti difference carries the gauge class: it differs from the
        # Wu-Yang gauge term by a variationally trivial (d_H-exact) piece
        gauge = E.parse("2*(u*v_t - v*u_t)/(u^2+v^2)", sp)
        residue = V.euler_lagrange(
            V.Lagrangian(sp, mu.top_coefficient - gauge)
        )
        assert all(E.is_zero(c) for c in residue.components)

    def test_inconsistent_source_rejected(self, mech2, sphere_atlas):
        good = V.euler_lagrange(
            V.Lagrangian(mech2, E.parse("2*(u_t^2+v_t^2)/(1+u^2+v^2)^2", mech2))
        )
        bad = G.SourceForm(mech2, [E.parse("u", mech2), E.ZERO])
        with pytest.raises(InconsistentSourceForm):
            build_presentation({"N": good, "S": bad}, sphere_atlas)

    def test_zero_eta(self, mech2, sphere_atlas):
        zero = G.SourceForm(mech2, [E.ZERO, E.ZERO])
        pres = build_presentation({"N": zero, "S": zero}, sphere_atlas)
        assert all(l.is_zero() for l in pres.lagrangians.values())
        assert pres.glues_globally()


class TestCoboundary:
    def test_zero_cochain_definition(self, monopole):
        atlas = monopole["atlas"]
        lam = monopole["lagrangian"].as_form()
        out = cech_coboundary({"N": lam, "S": lam}, atlas)
        gauge = E.parse("2*(u*v_t - v*u_t)/(u^2+v^2)", atlas.space)
        assert E.equals(out[("N", "S")].top_coefficient, gauge)

    def test_dd_zero_on_triple_atlas(self, mech2):
        sp = mech2
        t, u, v = sp.base_symbol(1), sp.field_symbol(1), sp.field_symbol(2)
        inv = {
            t: E.from_symbol(t),
            u: E.parse("u/(u^2+v^2)", sp),
            v: E.parse("-v/(u^2+v^2)", sp),
        }
        ident = {t: E.from_symbol(t), u: E.from_symbol(u), v: E.from_symbol(v)}
        atlas = Atlas(
            sp,
            [Chart("N", sp), Chart("E", sp), Chart("S", sp)],
            [
                Overlap(sp, "N", "S", inv),
                Overlap(sp, "S", "N", inv),
                Overlap(sp, "N", "E", ident),
                Overlap(sp, "E", "N", ident),
                Overlap(sp, "E", "S", inv),
                Overlap(sp, "S", "E", inv),
            ],
            triples=[("N", "E", "S")],
        )
        c0 = {
            "N": G.HorizontalForm.top(sp, E.parse("u*u_t", sp)),
            "E": G.HorizontalForm.top(sp, E.parse("u_t*v", sp)),
            "S": G.HorizontalForm.top(sp, E.parse("v*v_t", sp)),
        }
        c1 = cech_coboundary_zero(c0, atlas)
        c2 = cech_coboundary_one(c1, atlas)
        for form in c2.values():
            for c in form.coeffs.values():
                assert E.is_zero(c)

    def test_constant_global_form(self, sphere_atlas):
        sp = sphere_atlas.space
        c0 = {
            "N": G.HorizontalForm(sp, 0, {(): E.parse("u_t*0 + 3", sp)}),
            "S": G.HorizontalForm(sp, 0, {(): E.parse("3", sp)}),
        }
        out = cech_coboundary(c0, sphere_atlas)
        assert all(f.is_zero() for f in out.values())


class TestSourceProjection:
    def test_curvature_projects_to_lorentz_term(self, mech2):
        F = G.GeneralForm(mech2, 2)
        F.add_term(
            (("u", 1, ()), ("u", 2, ())), E.parse("4/(1+u^2+v^2)^2", mech2)
        )
        eta = source_projection(F, mech2)
        assert (eta.components[0] - E.parse("4*v_t/(1+u^2+v^2)^2", mech2)).is_zero()
        assert (eta.components[1] + E.parse("4*u_t/(1+u^2+v^2)^2", mech2)).is_zero()

    def test_exact_cartan_like_form_projects_to_el(self, mech1):
        # d(p ^ contact) reproduces the Euler-Lagrange components of 1/2 u_t^2
        sp = mech1
        theta = G.GeneralForm(sp, 1)
        theta.add_term((("u", 1, ()),), E.parse("u_t", sp))
        theta.add_term((("x", 1),), E.parse("-1/2*u_t^2", sp))
        alpha = theta.exterior_d()
        eta = source_projection(alpha, sp)
        assert (eta.components[0] + E.parse("u_{tt}", sp)).is_zero()


class TestCycles:
    def test_face_mismatch_detected(self, sphere_atlas):
        sp = sphere_atlas.space
        t, u, v = sp.base_symbol(1), sp.field_symbol(1), sp.field_symbol(2)
        from vjp.cech.cycles import param_symbol

        s1, s2 = E.from_symbol(param_symbol(1)), E.from_symbol(param_symbol(2))
        pi = E.from_symbol(
            __import__("vjp.jetspace", fromlist=["const_symbol"]).const_symbol(
                "pi", math.pi
            )
        )
        ang = E.scale(pi, Fraction(2)) * s2
        polar = {t: E.ZERO, u: s1 * E.cos(ang), v: s1 * E.sin(ang)}
        legs = [CycleLeg("N", polar), CycleLeg("S", polar)]
        # missing the angle reversal: boundary circles disagree
        cyc = Cycle("broken", 2, legs, [FaceMatch(0, (1, 1), 1, (1, 1), [])])
        with pytest.raises(CycleNotClosed):
            cyc.verify_closed(sphere_atlas)

    def test_monopole_period(self, monopole):
        atlas = monopole["atlas"]
        pres = build_presentation(monopole["eta"], atlas)
        sp = atlas.space
        F = G.GeneralForm(sp, 2)
        F.add_term((("u", 1, ()), ("u", 2, ())), E.parse("4/(1+u^2+v^2)^2", sp))
        rep = Representative(
            forms={"N": F, "S": F},
            remainder_lagrangian={
                cid: V.Lagrangian(sp, E.parse("2*(u_t^2+v_t^2)/(1+u^2+v^2)^2", sp), cid)
                for cid in ("N", "S")
            },
        )
        from vjp.cech.cycles import param_symbol
        from vjp.jetspace import const_symbol

        t, u, v = sp.base_symbol(1), sp.field_symbol(1), sp.field_symbol(2)
        s1, s2 = E.from_symbol(param_symbol(1)), E.from_symbol(param_symbol(2))
        ang = E.scale(E.from_symbol(const_symbol("pi", math.pi)), Fraction(2)) * s2
        polar = {t: E.ZERO, u: s1 * E.cos(ang), v: s1 * E.sin(ang)}
        cyc = Cycle(
            "sphere",
            2,
            [CycleLeg("N", polar), CycleLeg("S", polar)],
            [FaceMatch(0, (1, 1), 1, (1, 1), [E.ONE - s1])],
        )
        report = delta_class(pres, [cyc], rep)
        assert not report.zero_verdict
        assert abs(report.periods[0] - 4 * math.pi) < 1e-4 * 4 * math.pi


class TestIsomorphismCheck:
    def test_affine(self):
        ok, _ = isomorphism_hypothesis_check("affine", 3)
        assert ok

    def test_torus_over_circle(self):
        ok, _ = isomorphism_hypothesis_check(
            "product", 1, base_betti=[1, 1], fiber_betti=[1, 1]
        )
        assert not ok

    def test_point_fiber(self):
        ok, _ = isomorphism_hypothesis_check(
            "product", 1, base_betti=[1, 1], fiber_betti=[1]
        )
        assert ok

    def test_unknown(self):
        ok, reason = isomorphism_hypothesis_check("unknown", 2)
        assert not ok and "unknown" in reason


class TestSectionHomotopyInvariance:
    def test_pullback_periods_agree_along_declared_homotopy(self):
        # two homotopic sections produce equal period vectors within 2*tau_quad
        from vjp.examples_gallery import torus_winding
        from vjp.problem import load_problem, section_at_homotopy
        from vjp.cech import pullback_class_check

        problem = load_problem(torus_winding())
        rep = problem.representatives["delta_prime"]
        cycles = [c for c in problem.cycles if c.target == "X"]
        periods = []
        for h in ("0", "1"):
            sections = section_at_homotopy(problem, "winding1", h)
            report = pullback_class_check(rep, sections, cycles, problem.atlas)
            periods.append(report.periods[0])
        assert abs(periods[0] - periods[1]) < 2e-6
