"""The five user-facing pipelines over a loaded problem.

Each run_* function seeds the process RNG from the problem (or override),
performs the symbolic/numeric work, and returns a JSON-ready report dict.
Mathematical failures raise MathError subtypes; the CLI and service layers
translate them into exit codes / HTTP errors.
"""

from __future__ import annotations

import numpy as np

from . import expr as ex
from . import rng as rng_mod
from .errors import MathError, NoRepresentativeAvailable, SchemaError
from .expr.equality import is_zero
from .oracle import conservation_check
from .reports import REPORT_SCHEMA
from .varcalc import (
    admissibility_checks,
    classify_symmetry,
    euler_lagrange,
    helmholtz_check,
    tonti_lagrangian,
)
from .cech import (
    build_presentation,
    delta_class,
    delta_prime_class,
    global_existence_report,
    isomorphism_hypothesis_check,
    pullback_class_check,
)
from .cech.presentation import LocalPresentation, cech_coboundary_zero


def _setup(problem, seed=None, tolerances=None):
    effective_seed = problem.seed if seed is None else int(seed)
    rng_mod.set_seed(effective_seed)
    tols = dict(problem.tolerances)
    for k, v in (tolerances or {}).items():
        if k not in tols:
            raise SchemaError(f"unknown tolerance {k!r}")
        tols[k] = float(v)
    return effective_seed, tols


def _base_report(command, problem, seed):
    return {
        "schema": REPORT_SCHEMA,
        "command": command,
        "title": problem.title,
        "seed": seed,
        "grammar": "vjp-grammar-1",
    }


def _eta_by_chart(problem):
    """The source form per chart, deriving it from the Lagrangian if needed."""
    if problem.eta is not None:
        return problem.eta
    return {cid: euler_lagrange(lam) for cid, lam in problem.lagrangians.items()}


def _chart_lagrangians(problem, presentation=None):
    if problem.lagrangians is not None:
        return problem.lagrangians
    if presentation is not None:
        return presentation.lagrangians
    raise MathError("no Lagrangian data available")


def _presentation(problem):
    from .varcalc import Lagrangian

    eta = _eta_by_chart(problem)
    if problem.lagrangians is not None:
        # user Lagrangians present eta directly; certify that the coboundary
        # differences are variationally trivial (they must all present the
        # same global source form)
        lams = problem.lagrangians
        mu = cech_coboundary_zero(
            {cid: lam.as_form() for cid, lam in lams.items()}, problem.atlas
        )
        for (i, j), diff in mu.items():
            if diff.is_zero():
                continue
            residual = euler_lagrange(Lagrangian(problem.space, diff.top_coefficient, i))
            for comp in residual.components:
                if not is_zero(comp):
                    raise MathError(
                        f"chart Lagrangians on overlap ({i},{j}) present"
                        " different source forms"
                    )
        return LocalPresentation(problem.atlas, eta, lams, mu)
    return build_presentation(eta, problem.atlas)


def _cycles_of(problem, dim, target=None):
    out = []
    for c in problem.cycles:
        if c.dim != dim:
            continue
        if target is not None and c.target != target:
            continue
        out.append(c)
    return out


# -- check-variational -------------------------------------------------------


def run_check_variational(problem, seed=None, tolerances=None):
    seed, tols = _setup(problem, seed, tolerances)
    report = _base_report("check-variational", problem, seed)
    problem.atlas.verify()
    eta = _eta_by_chart(problem)
    helmholtz = {}
    locally = True
    for cid, src in eta.items():
        result = helmholtz_check(src)
        helmholtz[cid] = {
            "passes": bool(result),
            "residuals": {
                f"a={a} b={b} K={list(K)}": str(r)
                for (a, b, K), r in result.residuals.items()
            },
        }
        locally = locally and bool(result)
    report["helmholtz"] = helmholtz
    report["locally_variational"] = locally
    report["globally_variational"] = None
    report["delta"] = None
    if locally:
        pres = _presentation(problem)
        rep = problem.representatives.get("delta")
        cycles = _cycles_of(problem, problem.space.n + 1, "Y")
        try:
            cls = delta_class(
                pres, cycles, rep, partition=problem.partition, tau=tols["tau_class"]
            )
            report["delta"] = cls.as_dict()
            report["globally_variational"] = bool(cls.zero_verdict)
        except NoRepresentativeAvailable as err:
            report["delta"] = {"error": str(err)}
            report["globally_variational"] = None
    report["verdict"] = (
        "globally variational"
        if report["globally_variational"]
        else ("not locally variational" if not locally else "obstructed or undecided")
    )
    report["exit_code"] = 0 if report["globally_variational"] else 1
    return report


# -- derive --------------------------------------------------------------------


def run_derive(problem, seed=None, tolerances=None):
    seed, _ = _setup(problem, seed, tolerances)
    report = _base_report("derive", problem, seed)
    problem.atlas.verify()
    charts = {}
    if problem.lagrangians is not None:
        for cid, lam in problem.lagrangians.items():
            src = euler_lagrange(lam)
            charts[cid] = {
                "euler_lagrange": [str(c) for c in src.components],
                "order": src.max_jet_order(),
            }
    else:
        for cid, src in problem.eta.items():
            result = helmholtz_check(src)
            entry = {"helmholtz_passes": bool(result)}
            if result:
                chart = problem.atlas.charts[cid]
                lam = tonti_lagrangian(src, center=chart.fiber_center, check=False)
                entry["tonti_lagrangian"] = str(lam.density)
                rt = euler_lagrange(lam)
                entry["round_trip"] = all(
                    bool(is_zero(a - b))
                    for a, b in zip(rt.components, src.components)
                )
            charts[cid] = entry
    report["charts"] = charts
    report["exit_code"] = 0
    return report


# -- noether --------------------------------------------------------------------


def run_noether(problem, seed=None, tolerances=None):
    seed, tols = _setup(problem, seed, tolerances)
    report = _base_report("noether", problem, seed)
    problem.atlas.verify()
    eta = _eta_by_chart(problem)
    pres = _presentation(problem)
    lams = _chart_lagrangians(problem, pres)
    chart_ids = problem.atlas.chart_ids()
    symmetries = {}
    for sid, xi_by_chart in problem.symmetries.items():
        _verify_symmetry_consistency(problem, xi_by_chart)
        entry = {"charts": {}}
        lag_sym_all, eq_sym_all = True, True
        for cid in chart_ids:
            xi = xi_by_chart[cid]
            lam = lams[cid]
            chart = problem.atlas.charts[cid]
            lag_sym, eq_sym, lie_l, epsilon = classify_symmetry(xi, lam, eta[cid])
            lag_sym_all = lag_sym_all and lag_sym
            eq_sym_all = eq_sym_all and eq_sym
            chart_entry = {
                "lagrangian_symmetry": lag_sym,
                "equation_symmetry": eq_sym,
                "epsilon": str(epsilon),
            }
            if eq_sym:
                from .varcalc import noether_bessel_hagen_current, strong_noether_current

                current, beta, cert = noether_bessel_hagen_current(
                    xi, lam, eta[cid],
                    fiber_center=chart.fiber_center,
                    base_center=chart.base_center,
                )
                strong, nu, cert2 = strong_noether_current(
                    xi, lam, eta[cid],
                    fiber_center=chart.fiber_center,
                    base_center=chart.base_center,
                )
                _numeric_recheck_certificates(
                    xi, eta[cid], current, strong, beta, cert, cert2, cid
                )
                chart_entry.update(
                    {
                        "beta": str(beta),
                        "nu": str(nu),
                        "noether_bessel_hagen": str(current),
                        "strong": str(strong),
                        "conservation_certificate": cert,
                        "strong_equivalence_certificate": cert2,
                    }
                )
            entry["charts"][cid] = chart_entry
        entry["classification"] = (
            "lagrangian-symmetry"
            if lag_sym_all
            else ("equation-symmetry" if eq_sym_all else "not-a-symmetry")
        )
        if eq_sym_all:
            entry["admissibility"] = admissibility_checks(
                xi_by_chart, lams, pres.mu
            )
        if (
            eq_sym_all
            and problem.space.n == 1
            and problem.model.conservation is not None
        ):
            entry["conservation_drift"] = _conservation_drift(
                problem, eta, lams, xi_by_chart
            )
        symmetries[sid] = entry
    report["symmetries"] = symmetries
    report["exit_code"] = 0
    return report


def _verify_symmetry_consistency(problem, xi_by_chart):
    for (i, j), ov in problem.atlas.overlaps.items():
        if not ov.check_field_compatibility(xi_by_chart[i], xi_by_chart[j]):
            raise MathError(
                f"symmetry components incompatible across overlap ({i},{j})"
            )


def _numeric_recheck_certificates(xi, eta, current, strong, beta, cert, cert2, cid):
    """Re-check symbolically passed certificates with random sampling.

    A symbolic pass that fails numerically means a canonicalizer bug; that
    is a hard internal error, never a report entry.
    """
    from .errors import UndecidableEquality
    from .jetgeo import dH
    from .oracle import symbolic_numeric_crosscheck

    contraction = eta.contract(xi.vertical_components())
    checks = []
    if cert:
        checks.append(
            (
                "on-shell conservation",
                contraction.top_coefficient + dH(current).top_coefficient,
                ex.ZERO,
            )
        )
    if cert2:
        checks.append(
            (
                "strong-current equivalence",
                dH(strong).top_coefficient,
                dH(beta).top_coefficient,
            )
        )
    for label, lhs, rhs in checks:
        try:
            result = symbolic_numeric_crosscheck(lhs, rhs, trials=8)
        except UndecidableEquality:
            continue
        if not result.passed:
            raise MathError(
                f"symbolic certificate ({label}) on chart {cid!r} failed the"
                f" numeric cross-check (max deviation {result.max_deviation});"
                " canonicalizer bug suspected"
            )


def _conservation_drift(problem, eta, lams, xi_by_chart):
    cons = problem.model.conservation
    cid = problem.atlas.chart_ids()[0]
    chart = problem.atlas.charts[cid]
    from .varcalc import noether_bessel_hagen_current

    current, _, _ = noether_bessel_hagen_current(
        xi_by_chart[cid],
        lams[cid],
        eta[cid],
        fiber_center=chart.fiber_center,
        base_center=chart.base_center,
    )
    result = conservation_check(
        current,
        eta[cid],
        cons.initial_position,
        cons.initial_velocity,
        t0=cons.t_span[0],
        t1=cons.t_span[1],
        step=cons.step,
    )
    return {"chart": cid, "drift": result.drift, "initial": result.initial}


# -- glue --------------------------------------------------------------------------


def run_glue(problem, seed=None, tolerances=None):
    seed, tols = _setup(problem, seed, tolerances)
    report = _base_report("glue", problem, seed)
    problem.atlas.verify()
    eta = _eta_by_chart(problem)
    pres = _presentation(problem)
    report["presentation"] = {
        "lagrangians": {cid: str(lam.density) for cid, lam in pres.lagrangians.items()},
        "mu": {f"{i}|{j}": str(m) for (i, j), m in pres.mu.items()},
        "glues_globally": pres.glues_globally(),
    }
    rep = problem.representatives.get("delta")
    cycles = _cycles_of(problem, problem.space.n + 1, "Y")
    try:
        cls = delta_class(
            pres, cycles, rep, partition=problem.partition, tau=tols["tau_class"]
        )
        report["delta"] = cls.as_dict()
    except NoRepresentativeAvailable as err:
        report["delta"] = {"error": str(err)}
    dp_cycles = _cycles_of(problem, problem.space.n, "Y")
    dp_rep = problem.representatives.get("delta_prime")
    symmetries = {}
    for sid, xi_by_chart in problem.symmetries.items():
        _verify_symmetry_consistency(problem, xi_by_chart)
        omega = {
            cid: eta[cid].contract(xi_by_chart[cid].vertical_components())
            for cid in problem.atlas.chart_ids()
        }
        try:
            cls = delta_prime_class(
                omega, problem.atlas, dp_cycles, dp_rep, tau=tols["tau_class"]
            )
            symmetries[sid] = cls.as_dict()
        except (NoRepresentativeAvailable, MathError) as err:
            symmetries[sid] = {"error": str(err)}
    report["delta_prime"] = symmetries
    report["exit_code"] = 0
    return report


# -- obstruction ----------------------------------------------------------------------


def criticality_certificate(problem, section_info, eta_by_chart, tau_crit):
    """max |E_a(j sigma)| over a sample grid on each chart of the section."""
    space = problem.space
    worst = 0.0
    for cid, section in section_info["by_chart"].items():
        src = eta_by_chart[cid]
        order = src.max_jet_order()
        subs = section.substitution(order)
        box = section_info["box"] or [(0.0, 1.0)] * space.n
        npts = section_info["grid"]
        axes = [np.linspace(a, b, npts) for (a, b) in box]
        grids = np.meshgrid(*axes, indexing="ij")
        env = {space.base_symbol(i + 1): grids[i] for i in range(space.n)}
        for comp in src.components:
            on_section = ex.substitute(comp, subs)
            vals = np.asarray(ex.evaluate(on_section, env), dtype=float)
            if vals.size:
                worst = max(worst, float(np.max(np.abs(vals))))
    return worst, worst < tau_crit


def run_obstruction(problem, seed=None, tolerances=None):
    seed, tols = _setup(problem, seed, tolerances)
    report = _base_report("obstruction", problem, seed)
    problem.atlas.verify()
    eta = _eta_by_chart(problem)
    pres = _presentation(problem)
    iso, iso_reason = isomorphism_hypothesis_check(
        problem.model.bundle.kind,
        problem.space.n,
        problem.model.bundle.base_betti,
        problem.model.bundle.fiber_betti,
    )
    dp_cycles = _cycles_of(problem, problem.space.n, "Y")
    dp_rep = problem.representatives.get("delta_prime")
    base_cycles = _cycles_of(problem, problem.space.n, "X")
    symmetry_reports = {}
    for sid, xi_by_chart in problem.symmetries.items():
        _verify_symmetry_consistency(problem, xi_by_chart)
        omega = {
            cid: eta[cid].contract(xi_by_chart[cid].vertical_components())
            for cid in problem.atlas.chart_ids()
        }
        lie_eta_zero = True
        for cid in problem.atlas.chart_ids():
            from .varcalc import lie_derivative_source

            lie = lie_derivative_source(xi_by_chart[cid], eta[cid], check=False)
            if not all(bool(is_zero(c)) for c in lie.components):
                lie_eta_zero = False
                break
        entry = {"equation_symmetry": lie_eta_zero, "delta_prime": None}
        if lie_eta_zero:
            try:
                entry["delta_prime"] = delta_prime_class(
                    omega, problem.atlas, dp_cycles, dp_rep, tau=tols["tau_class"]
                )
            except NoRepresentativeAvailable as err:
                entry["delta_prime_error"] = str(err)
        symmetry_reports[sid] = entry
    section_reports = {}
    for sid, info in problem.sections.items():
        residual, critical = criticality_certificate(
            problem, info, eta, tols["tau_crit"]
        )
        entry = {
            "critical": critical,
            "max_residual": residual,
            "homotopy_class": info["homotopy_class"],
            "pullback": None,
        }
        if dp_rep is not None and base_cycles:
            entry["pullback"] = pullback_class_check(
                dp_rep, info["by_chart"], base_cycles, problem.atlas,
                tau=tols["tau_class"],
            )
        section_reports[sid] = entry
    composite = global_existence_report(
        report_delta(pres, problem, tols),
        {
            sid: {
                "equation_symmetry": e["equation_symmetry"],
                "delta_prime": e["delta_prime"],
            }
            for sid, e in symmetry_reports.items()
        },
        section_reports,
        iso,
        iso_reason,
    )
    report["result"] = composite
    report["exit_code"] = 0
    return report


def report_delta(pres, problem, tols):
    rep = problem.representatives.get("delta")
    cycles = _cycles_of(problem, problem.space.n + 1, "Y")
    try:
        return delta_class(
            pres, cycles, rep, partition=problem.partition, tau=tols["tau_class"]
        )
    except NoRepresentativeAvailable:
        return None


COMMANDS = {
    "check-variational": run_check_variational,
    "derive": run_derive,
    "noether": run_noether,
    "glue": run_glue,
    "obstruction": run_obstruction,
}
