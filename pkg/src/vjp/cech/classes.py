"""Obstruction classes as period vectors, and the global-existence logic.

Class evaluation is by periods of a closed representative over user-supplied
cycles (desk-scale manifolds have small known cycle bases); the zero-verdict
compares every period against tau_class. Representatives come from two
paths: a user-supplied closed form that projects onto the target (preferred),
or partition-of-unity collation from the presentation's coboundary
potentials (mechanics case)."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import (
    DivisionByZeroExpression,
    MathError,
    NonPolynomialInT,
    NoRepresentativeAvailable,
    NotVariationallyTrivial,
    PropositionViolation,
    SectionNotGlobal,
)
from ..jetspace import SymbolKind, multi_subtract
from .. import expr as ex
from ..expr.equality import equals, is_zero
from ..jetgeo import (
    GeneralForm,
    HorizontalForm,
    Section,
    SourceForm,
    dH,
    pullback_section,
    total_derivative_multi,
)
from ..varcalc import Lagrangian, dH_homotopy, euler_lagrange

TAU_CLASS = 1e-4


@dataclass
class ClassReport:
    class_symbol: str  # "delta(eta)" | "delta'(omega)" | "jsigma*-pullback"
    periods: list
    zero_verdict: bool
    provenance: str
    cycle_ids: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @classmethod
    def from_periods(cls, symbol, periods, cycle_ids, provenance, tau=TAU_CLASS, **details):
        zero = all(abs(p) < tau for p in periods)
        return cls(symbol, list(periods), zero, provenance, list(cycle_ids), dict(details))

    def as_dict(self):
        return {
            "class": self.class_symbol,
            "periods": self.periods,
            "cycles": self.cycle_ids,
            "zero_verdict": self.zero_verdict,
            "provenance": self.provenance,
            "details": self.details,
        }


def source_projection(form, space):
    """The source-form representative of a general (n+1)-form.

    Expands du^a_J into its contact and horizontal parts, keeps the
    one-contact component against the full base volume, and reduces it with
    the interior Euler operator: E_a = sum_J (-1)^|J| D_J A_{aJ}.
    """
    n = space.n
    if form.degree != n + 1:
        raise MathError("source projection expects a degree n+1 form")
    full = tuple(range(1, n + 1))
    A = {}
    for legs, coeff in form.coeffs.items():
        upos = [p for p, leg in enumerate(legs) if leg[0] == "u"]
        for p in upos:
            contact = legs[p]
            rest = legs[:p] + legs[p + 1 :]
            sign0 = Fraction((-1) ** p)  # move the contact leg to the front
            # expand the remaining legs horizontally
            pieces = [((), coeff)]
            for leg in rest:
                new_pieces = []
                for idxs, c in pieces:
                    if leg[0] == "x":
                        new_pieces.append((idxs + (leg[1],), c))
                    else:
                        _, a, jet = leg
                        for i in range(1, n + 1):
                            sym = space.jet_symbol(a, jet + (i,))
                            new_pieces.append((idxs + (i,), c * ex.from_symbol(sym)))
                pieces = new_pieces
            for idxs, c in pieces:
                if len(set(idxs)) != n:
                    continue
                perm_sign = _sort_sign(idxs)
                key = (contact[1], contact[2])
                cur = A.get(key, ex.ZERO) + ex.scale(c, sign0 * perm_sign)
                if cur.is_zero():
                    A.pop(key, None)
                else:
                    A[key] = cur
    comps = [ex.ZERO] * space.m
    for (a, jet), coeff in A.items():
        term = total_derivative_multi(coeff, jet, space)
        comps[a - 1] = comps[a - 1] + ex.scale(term, Fraction((-1) ** len(jet)))
    return SourceForm(space, comps)


def _sort_sign(idxs):
    sign = 1
    arr = list(idxs)
    for i in range(len(arr)):
        for j in range(i + 1, len(arr)):
            if arr[i] > arr[j]:
                sign = -sign
    return Fraction(sign)


@dataclass
class Representative:
    """A closed-form representative with its verification plan."""

    forms: dict  # chart_id -> GeneralForm
    remainder_lagrangian: dict | None = None  # chart_id -> Lagrangian (global)
    remainder_current: dict | None = None  # chart_id -> HorizontalForm (global)


def verify_representative_closed(rep, atlas, rng=None):
    for cid, form in rep.forms.items():
        d = form.exterior_d()
        for legs, c in d.coeffs.items():
            if not is_zero(c, rng=rng):
                raise MathError(f"representative on chart {cid!r} is not closed")
    for (i, j) in atlas.overlaps:
        if i in rep.forms and j in rep.forms:
            pulled = atlas.pull_to(i, j, rep.forms[j])
            diff = rep.forms[i] - pulled
            for legs, c in diff.coeffs.items():
                if not is_zero(c, rng=rng):
                    raise MathError(
                        f"representative disagrees across overlap ({i},{j})"
                    )


def verify_global_family(family, atlas, rng=None, what="family"):
    """Check a per-chart family of horizontal forms glues to a global object."""
    for (i, j) in atlas.overlaps:
        if i in family and j in family:
            diff = family[i] - atlas.pull_to(i, j, family[j])
            for s, c in diff.coeffs.items():
                if not is_zero(c, rng=rng):
                    raise MathError(f"{what} does not glue across overlap ({i},{j})")


def delta_class(
    presentation, cycles, representative=None, partition=None, tau=TAU_CLASS, rng=None
):
    """delta(eta): zero iff eta is globally variational over the cycle basis."""
    atlas = presentation.atlas
    space = atlas.space
    cycle_ids = [c.id for c in cycles]
    if presentation.glues_globally():
        return ClassReport.from_periods(
            "delta(eta)",
            [0.0] * len(cycles),
            cycle_ids,
            "trivial-cover: chart Lagrangians glue globally",
            tau=tau,
        )
    if representative is not None and representative.forms:
        verify_representative_closed(representative, atlas, rng=rng)
        _verify_delta_projection(representative, presentation, rng=rng)
        periods = []
        for cyc in cycles:
            cyc.verify_closed(atlas)
            val, _ = cyc.period(representative.forms, atlas)
            periods.append(val)
        return ClassReport.from_periods(
            "delta(eta)", periods, cycle_ids, "direct closed-form", tau=tau
        )
    forms = collate_delta_representative(presentation, partition=partition, rng=rng)
    periods = []
    for cyc in cycles:
        cyc.verify_closed(atlas)
        val, _ = cyc.period(forms, atlas)
        periods.append(val)
    return ClassReport.from_periods(
        "delta(eta)", periods, cycle_ids, "partition-of-unity collation", tau=tau
    )


def _verify_delta_projection(rep, presentation, rng=None):
    """eta_i == proj(alpha_i) + E(lambda_rem,i), with a global remainder."""
    atlas = presentation.atlas
    space = atlas.space
    if rep.remainder_lagrangian:
        verify_global_family(
            {cid: lam.as_form() for cid, lam in rep.remainder_lagrangian.items()},
            atlas,
            rng=rng,
            what="remainder Lagrangian",
        )
    for cid, form in rep.forms.items():
        target = presentation.eta[cid]
        proj = source_projection(form, space)
        if rep.remainder_lagrangian and cid in rep.remainder_lagrangian:
            proj = proj + euler_lagrange(rep.remainder_lagrangian[cid])
        for a, (lhs, rhs) in enumerate(zip(target.components, proj.components)):
            if not equals(lhs, rhs, rng=rng):
                raise MathError(
                    f"representative does not project onto the source form on"
                    f" chart {cid!r} (component {a + 1})"
                )


def collate_delta_representative(presentation, partition=None, rng=None):
    """Cech-de Rham collation of a closed (n+1)-form from the mu potentials.

    Implemented for the mechanics case n = 1 with function-valued potentials:
    chi_ij with d_H chi_ij = mu_ij gives the closed-1-form cocycle d chi_ij,
    and a partition of unity turns it into a global closed 2-form
    alpha|_i = sum_k d(rho_k) ^ d(chi_ik). Requires overlap domains where the
    potentials exist; a missing potential is exactly the obstruction showing
    up, reported as no-representative-available.
    """
    atlas = presentation.atlas
    space = atlas.space
    if space.n != 1:
        raise NoRepresentativeAvailable(
            "partition-of-unity collation implemented for n = 1 only;"
            " supply a closed representative"
        )
    if not partition:
        raise NoRepresentativeAvailable(
            "no closed representative supplied and no partition of unity available"
        )
    chi = {}
    for (i, j), mu in presentation.mu.items():
        chart = atlas.charts[i]
        try:
            pot = dH_homotopy(
                mu,
                fiber_center=chart.fiber_center,
                base_center=chart.base_center,
                rng=rng,
            )
        except (
            NotVariationallyTrivial,
            NonPolynomialInT,
            DivisionByZeroExpression,
        ) as err:
            raise NoRepresentativeAvailable(
                f"no potential for mu on overlap ({i},{j}): {err}"
            ) from err
        chi[(i, j)] = pot.coefficient(())
    # sum rho = 1 on each chart, then alpha_i = sum_k d rho_k ^ d chi_ik
    forms = {}
    for i in atlas.chart_ids():
        rho_here = {}
        for k, rho in partition.items():
            if k == i:
                rho_here[k] = rho
            elif atlas.has_overlap(i, k):
                rho_here[k] = atlas.pull_to(i, k, rho)
        total = ex.ZERO
        for r in rho_here.values():
            total = total + r
        if not equals(total, ex.ONE, rng=rng):
            raise MathError(f"partition of unity does not sum to 1 on chart {i!r}")
        alpha = GeneralForm(space, 2)
        for k, rho in rho_here.items():
            if k == i:
                continue
            if (i, k) not in chi:
                raise NoRepresentativeAvailable(
                    f"collation needs the potential on overlap ({i},{k})"
                )
            rho_form = GeneralForm(space, 0)
            rho_form.add_term((), rho)
            chi_form = GeneralForm(space, 0)
            chi_form.add_term((), chi[(i, k)])
            alpha = alpha + rho_form.exterior_d().wedge(chi_form.exterior_d())
        forms[i] = alpha
    return forms


def _is_constant_expression(e):
    return all(s.kind == SymbolKind.CONST for s in e.free_symbols())


def _solve_constant_cocycle(diffs, atlas, rng=None):
    """Try constants c_i with d_ij + c_i - c_j = 0 over the nerve graph.

    Returns {chart -> Expression} or None when some nerve loop obstructs.
    """
    charts = atlas.chart_ids()
    assign = {charts[0]: ex.ZERO}
    frontier = [charts[0]]
    edges = dict(diffs)
    while frontier:
        i = frontier.pop()
        for (a, b), d in edges.items():
            if a == i and b not in assign:
                assign[b] = assign[a] + d
                frontier.append(b)
            elif b == i and a not in assign:
                assign[a] = assign[b] - d
                frontier.append(a)
    if len(assign) != len(charts):
        # disconnected nerve: treat the uncovered charts independently
        for c in charts:
            assign.setdefault(c, ex.ZERO)
    for (a, b), d in edges.items():
        if not equals(d + assign[a], assign[b], rng=rng):
            return None
    return assign


def delta_prime_class(
    omega_by_chart,
    atlas,
    cycles,
    representative=None,
    tau=TAU_CLASS,
    rng=None,
):
    """delta'(omega) for a global degree-n horizontal form with E_n(omega)=0.

    Zero verdict certifies a global current nu with d_H nu = omega; the
    shortcut paths (omega identically zero; chart potentials that glue up to
    a solvable constant cocycle) report exact global currents, otherwise
    periods of a verified closed representative decide over the cycle basis.
    """
    space = atlas.space
    cycle_ids = [c.id for c in cycles]
    if all(f.is_zero() for f in omega_by_chart.values()):
        return ClassReport.from_periods(
            "delta'(omega)", [0.0] * len(cycles), cycle_ids, "zero form", tau=tau
        )
    for cid, form in omega_by_chart.items():
        residual = euler_lagrange(Lagrangian(space, form.top_coefficient, cid))
        for comp in residual.components:
            if not is_zero(comp, rng=rng):
                raise NotVariationallyTrivial(
                    f"E_n(omega) != 0 on chart {cid!r}; delta' undefined"
                )
    potentials = {}
    have_potentials = True
    for cid, form in omega_by_chart.items():
        chart = atlas.charts[cid]
        try:
            potentials[cid] = dH_homotopy(
                form,
                fiber_center=chart.fiber_center,
                base_center=chart.base_center,
                check=False,
                rng=rng,
            )
        except (NotVariationallyTrivial, NonPolynomialInT, DivisionByZeroExpression):
            have_potentials = False
            break
    if have_potentials:
        diffs = {}
        glue = True
        nontrivial = False
        for (i, j) in atlas.overlaps:
            d = potentials[i] - atlas.pull_to(i, j, potentials[j])
            if space.n == 1:
                dc = d.coefficient(())
                if _is_constant_expression(dc):
                    # zero differences still constrain the gauge constants
                    diffs[(i, j)] = dc
                    nontrivial = nontrivial or not dc.is_zero()
                else:
                    glue = False
                    break
            else:
                if d.is_zero():
                    continue
                if not all(is_zero(c, rng=rng) for c in d.coeffs.values()):
                    glue = False
                    break
        if glue and space.n == 1 and nontrivial:
            assign = _solve_constant_cocycle(diffs, atlas, rng=rng)
            if assign is None:
                glue = False
            else:
                potentials = {
                    cid: HorizontalForm(
                        space, 0, {(): potentials[cid].coefficient(()) + assign[cid]}
                    )
                    for cid in potentials
                }
        if glue:
            return ClassReport.from_periods(
                "delta'(omega)",
                [0.0] * len(cycles),
                cycle_ids,
                "global current: chart potentials glue",
                tau=tau,
                global_current={
                    cid: str(p) for cid, p in potentials.items()
                },
            )
    if representative is None or not representative.forms:
        raise NoRepresentativeAvailable(
            "chart potentials do not glue and no closed representative was supplied"
        )
    verify_representative_closed(representative, atlas, rng=rng)
    _verify_delta_prime_projection(representative, omega_by_chart, atlas, rng=rng)
    periods = []
    for cyc in cycles:
        cyc.verify_closed(atlas)
        val, _ = cyc.period(representative.forms, atlas)
        periods.append(val)
    return ClassReport.from_periods(
        "delta'(omega)", periods, cycle_ids, "direct closed-form", tau=tau
    )


def _verify_delta_prime_projection(rep, omega_by_chart, atlas, rng=None):
    """h(alpha_i) == omega_i, up to d_H of a declared global current."""
    if rep.remainder_current:
        verify_global_family(
            rep.remainder_current, atlas, rng=rng, what="remainder current"
        )
    for cid, form in rep.forms.items():
        target = omega_by_chart[cid]
        h = form.horizontalize()
        if rep.remainder_current and cid in rep.remainder_current:
            h = h + dH(rep.remainder_current[cid])
        diff = target - h
        for s, c in diff.coeffs.items():
            if not is_zero(c, rng=rng):
                raise MathError(
                    f"representative does not project onto omega on chart {cid!r}"
                )


def check_section_global(sections_by_chart, atlas, rng=None):
    """Chart pairs agree under the transition: psi(x, sigma_i) == sigma_j o phi.

    The section is given on the charts its graph meets; the check runs on
    every overlap where both chart representations exist.
    """
    space = atlas.space
    checked = 0
    for (i, j), ov in atlas.overlaps.items():
        if i not in sections_by_chart or j not in sections_by_chart:
            continue
        checked += 1
        sig_i = sections_by_chart[i]
        sig_j = sections_by_chart[j]
        fiber_subs = {
            space.field_symbol(a): sig_i.components[a - 1]
            for a in range(1, space.m + 1)
        }
        base_subs = {
            space.base_symbol(k): ov.mapping[space.base_symbol(k)]
            for k in range(1, space.n + 1)
        }
        for a in range(1, space.m + 1):
            lhs = ex.substitute(ov.mapping[space.field_symbol(a)], fiber_subs)
            rhs = ex.substitute(sig_j.components[a - 1], base_subs)
            if not equals(lhs, rhs, rng=rng):
                raise SectionNotGlobal(
                    f"section incompatible across overlap ({i},{j})"
                    f" in field {space.field_names[a - 1]}"
                )
    if len(sections_by_chart) > 1 and checked == 0:
        raise SectionNotGlobal(
            "no overlap carries two chart representations; globality unverifiable"
        )


NO_GLOBAL_SOLUTIONS = "no-global-solutions-in-homotopy-class"


def pullback_class_check(
    representative, sections_by_chart, cycles, atlas, tau=TAU_CLASS, rng=None
):
    """Periods of jsigma* alpha over base cycles; nonzero obstruction fires
    the no-global-solutions certificate for the section's homotopy class."""
    verify_representative_closed(representative, atlas, rng=rng)
    check_section_global(sections_by_chart, atlas, rng=rng)
    pulled = {}
    for cid, form in representative.forms.items():
        if cid in sections_by_chart:
            pulled[cid] = pullback_section(form, sections_by_chart[cid])
    # jsigma* alpha is a global base form: legs on charts the section misses
    # borrow it from an overlapping chart through the base transition
    for cyc in cycles:
        for leg in cyc.legs:
            if leg.chart_id in pulled:
                continue
            for cid in list(pulled):
                if atlas.has_overlap(leg.chart_id, cid):
                    pulled[leg.chart_id] = atlas.pull_to(
                        leg.chart_id, cid, pulled[cid]
                    )
                    break
            else:
                raise SectionNotGlobal(
                    f"cannot express the pulled form on chart {leg.chart_id!r}"
                )
    periods = []
    for cyc in cycles:
        cyc.verify_closed(atlas)
        val, _ = cyc.period(pulled, atlas)
        periods.append(val)
    report = ClassReport.from_periods(
        "jsigma*-pullback", periods, [c.id for c in cycles], "direct closed-form", tau=tau
    )
    report.details["certificate"] = (
        NO_GLOBAL_SOLUTIONS if not report.zero_verdict else "inconclusive"
    )
    return report


ISO_TRUE_KINDS = {"affine", "vector", "contractible-fiber", "point-fiber", "trivial"}


def isomorphism_hypothesis_check(bundle_kind, n, base_betti=None, fiber_betti=None):
    """Whether pi* : H^n(X) -> H^n(Y) is an isomorphism, from declared data.

    Affine/vector/contractible fibers give a homotopy equivalence. Products
    use declared Kuenneth data: the fiber must contribute nothing to degree
    n. Anything else is reported False with the weaker membership statement
    left to the caller.
    """
    kind = (bundle_kind or "unknown").lower()
    if kind in ISO_TRUE_KINDS:
        return True, "fiber contractible or affine: homotopy equivalence with the base"
    if kind == "product":
        if not fiber_betti:
            return False, "product bundle without declared fiber Betti numbers"
        base = list(base_betti or [])
        fib = list(fiber_betti)

        def betti(lst, q):
            return lst[q] if 0 <= q < len(lst) else 0

        extra = sum(betti(fib, q) * betti(base, n - q) for q in range(1, n + 1))
        if extra == 0:
            return True, "Kuenneth: fiber contributes nothing through degree n"
        return False, (
            "Kuenneth: fiber contributes to degree <= n; pi* is not onto H^n(Y)"
        )
    return False, f"bundle kind {bundle_kind!r}: no isomorphism certificate"



def global_existence_report(
    delta_report,
    symmetry_reports,
    section_reports,
    iso_holds,
    iso_reason,
):
    """Composite verdict combining the Proposition and Corollary branches.

    symmetry_reports: {symmetry_id: {"equation_symmetry": bool,
    "delta_prime": ClassReport}}; section_reports: {section_id: {"critical":
    bool, "max_residual": float, "pullback": ClassReport | None,
    "homotopy_class": str}}. A certified critical global section together
    with the cohomology isomorphism forces every equation symmetry's current
    class to vanish; a violation is a hard internal error, never a report.
    """
    report = {
        "delta": delta_report.as_dict() if delta_report else None,
        "isomorphism_hypothesis": {"holds": bool(iso_holds), "reason": iso_reason},
        "symmetries": {},
        "sections": {},
    }
    critical_sections = [
        sid for sid, sec in section_reports.items() if sec.get("critical")
    ]
    proposition_active = bool(iso_holds) and bool(critical_sections)
    for sid, sec in section_reports.items():
        entry = {
            "critical": bool(sec.get("critical")),
            "max_residual": sec.get("max_residual"),
            "homotopy_class": sec.get("homotopy_class"),
        }
        pb = sec.get("pullback")
        if pb is not None:
            entry["pullback"] = pb.as_dict()
            entry["certificate"] = pb.details.get("certificate", "inconclusive")
        report["sections"][sid] = entry
    for qid, data in symmetry_reports.items():
        dp = data.get("delta_prime")
        entry = {
            "equation_symmetry": bool(data.get("equation_symmetry")),
            "delta_prime": dp.as_dict() if dp else None,
        }
        if dp is not None:
            entry["global_current_exists"] = bool(dp.zero_verdict)
        report["symmetries"][qid] = entry
        if (
            proposition_active
            and data.get("equation_symmetry")
            and dp is not None
            and not dp.zero_verdict
        ):
            raise PropositionViolation(
                f"certified critical global section {critical_sections[0]!r} with"
                f" isomorphism hypothesis, yet delta' of symmetry {qid!r} is"
                " nonzero: internal inconsistency"
            )
    if proposition_active:
        report["proposition"] = {
            "fired": True,
            "statement": (
                "global critical section + cohomology isomorphism: every"
                " equation symmetry admits a global conserved current"
            ),
            "witness_sections": critical_sections,
        }
    else:
        weaker = None
        if not iso_holds:
            weaker = (
                "without the isomorphism the class is only known to lie"
                " outside the pullback of the base cohomology"
            )
        report["proposition"] = {"fired": False, "weaker_statement": weaker}
    return report
