"""Helmholtz conditions: self-adjointness of the linearisation.

For eta with components E_a, the linearisation is the operator
(Dv)_a = sum_{b,J} (dE_a/du^b_J) D_J v^b.  eta is locally variational iff
this operator equals its formal adjoint, which in components reads

    H_{ab}^K  =  dE_a/du^b_K
                - sum_{J >= K} (-1)^|J| (J choose K) D_{J-K} (dE_b/du^a_J)
              =  0        for all a, b and multi-indices K.

The returned residuals witness failures and back the diagnostics surface.
"""

from __future__ import annotations

from fractions import Fraction

from ..jetspace import multi_binomial, multi_contains, multi_subtract
from .. import expr as ex
from ..expr.equality import is_zero
from ..jetgeo import total_derivative_multi
from .euler import grouped_jet_partials


class HelmholtzResult:
    def __init__(self, passes, residuals):
        self.passes = passes
        self.residuals = residuals  # {(a, b, K): Expression}, nonzero ones only

    def __bool__(self):
        return self.passes

    def worst(self):
        return next(iter(self.residuals.items()), None)


def helmholtz_residuals(eta):
    """All Helmholtz condition expressions, including the zero ones."""
    space = eta.space
    partials = [grouped_jet_partials(c, space) for c in eta.components]
    jets_by_pair = {}
    for a in range(1, space.m + 1):
        for (b, J) in partials[a - 1]:
            jets_by_pair.setdefault((a, b), set()).add(J)
    residuals = {}
    pairs = set(jets_by_pair) | {(b, a) for (a, b) in jets_by_pair}
    for (a, b) in sorted(pairs):
        ks = set()
        for J in jets_by_pair.get((a, b), ()):  # dE_a/du^b_K terms
            ks.add(J)
        for J in jets_by_pair.get((b, a), ()):  # adjoint side contributions
            ks.update(
                K
                for K in space.multi_indices(len(J))
                if multi_contains(J, K)
            )
        for K in sorted(ks):
            lhs = partials[a - 1].get((b, K), ex.ZERO)
            rhs = ex.ZERO
            for (bb, J), d in partials[b - 1].items():
                if bb != a or not multi_contains(J, K):
                    continue
                coeff = Fraction((-1) ** len(J)) * multi_binomial(J, K)
                term = total_derivative_multi(d, multi_subtract(J, K), space)
                rhs = rhs + ex.scale(term, coeff)
            residuals[(a, b, K)] = lhs - rhs
    return residuals


def helmholtz_check(eta, rng=None):
    """Pass iff every residual is zero under equals(); residuals returned."""
    residuals = helmholtz_residuals(eta)
    failing = {}
    for key, r in sorted(residuals.items()):
        if not is_zero(r, rng=rng):
            failing[key] = r
    return HelmholtzResult(not failing, failing)
