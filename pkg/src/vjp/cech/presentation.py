"""Local presentations of a global source form and the Cech coboundary."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import InconsistentSourceForm, HelmholtzFailed, MissingOverlapError
from .. import expr as ex
from ..expr.equality import equals, is_zero
from ..jetgeo import HorizontalForm
from ..varcalc import Lagrangian, euler_lagrange, helmholtz_check, tonti_lagrangian


@dataclass
class LocalPresentation:
    atlas: object
    eta: dict  # chart_id -> SourceForm (the same global form, per chart)
    lagrangians: dict  # chart_id -> Lagrangian
    mu: dict = field(default_factory=dict)  # (i, j) -> HorizontalForm on chart i

    def glues_globally(self):
        return all(m.is_zero() for m in self.mu.values())


def check_source_consistency(eta_by_chart, atlas, rng=None):
    """eta_i == pullback of eta_j on every declared overlap."""
    for (i, j), ov in atlas.overlaps.items():
        pulled = ov.pull_source(eta_by_chart[j])
        for a, (lhs, rhs) in enumerate(
            zip(eta_by_chart[i].components, pulled.components)
        ):
            if not equals(lhs, rhs, rng=rng):
                raise InconsistentSourceForm(
                    f"source form disagrees across overlap ({i},{j})"
                    f" in component {a + 1}"
                )


def build_presentation(eta_by_chart, atlas, rng=None, consistency=True):
    """Chart-wise Tonti Lagrangians with certified coboundary differences.

    Preconditions: the source form transforms consistently across overlaps
    and passes the Helmholtz check on every chart. Every mu_ij is certified
    variationally trivial (E_n(mu_ij) = 0) before the presentation returns.
    """
    if consistency:
        check_source_consistency(eta_by_chart, atlas, rng=rng)
    lagrangians = {}
    for cid, eta in eta_by_chart.items():
        result = helmholtz_check(eta, rng=rng)
        if not result:
            key = result.worst()[0]
            raise HelmholtzFailed(
                f"source form on chart {cid!r} is not locally variational"
                f" (first failing condition {key})"
            )
        chart = atlas.charts[cid]
        lam = tonti_lagrangian(eta, center=chart.fiber_center, check=False)
        lam.chart_id = cid
        lagrangians[cid] = lam
    mu = cech_coboundary_zero({cid: lam.as_form() for cid, lam in lagrangians.items()}, atlas)
    for (i, j), diff in mu.items():
        residual = euler_lagrange(Lagrangian(atlas.space, diff.top_coefficient, i))
        for comp in residual.components:
            if not is_zero(comp, rng=rng):
                raise InconsistentSourceForm(
                    f"presentation difference on overlap ({i},{j}) is not"
                    " variationally trivial"
                )
    return LocalPresentation(atlas, dict(eta_by_chart), lagrangians, mu)


def cech_coboundary_zero(cochain, atlas):
    """Coboundary of a 0-cochain of forms: (d c)_{ij} = c_i - pull_i(c_j)."""
    out = {}
    for (i, j) in atlas.overlaps:
        if i not in cochain or j not in cochain:
            raise MissingOverlapError(f"0-cochain misses charts for overlap ({i},{j})")
        out[(i, j)] = cochain[i] - atlas.pull_to(i, j, cochain[j])
    return out


def cech_coboundary_one(cochain, atlas):
    """(d c)_{ijk} = pull_i(c_jk) - c_ik + c_ij over declared triples."""
    out = {}
    for (i, j, k) in atlas.triples:
        for pair in ((i, j), (i, k)):
            if pair not in cochain:
                raise MissingOverlapError(f"1-cochain misses pair {pair}")
        if (j, k) not in cochain:
            raise MissingOverlapError(f"1-cochain misses pair {(j, k)}")
        out[(i, j, k)] = (
            atlas.pull_to(i, j, cochain[(j, k)]) - cochain[(i, k)] + cochain[(i, j)]
        )
    return out


def cech_coboundary(cochain, atlas):
    """Dispatch on cochain degree (chart tuples of length 1 or 2)."""
    if not cochain:
        return {}
    key = next(iter(cochain))
    if isinstance(key, str):
        return cech_coboundary_zero(cochain, atlas)
    if len(key) == 2:
        return cech_coboundary_one(cochain, atlas)
    raise MissingOverlapError("coboundary implemented for 0- and 1-cochains")
