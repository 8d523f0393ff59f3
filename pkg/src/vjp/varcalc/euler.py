"""Euler-Lagrange morphism and the integration-by-parts engine.

The IBP recursion is the single primitive behind the canonical Noether
current, the fiber homotopy, and the Tonti round-trip: it rewrites

    sum_{a,J} F^J_a * D_J v^a
      =  sum_a v^a * (-D)_J F^J_a  +  D_i B^i[v, F]

peeling one index at a time, with the boundary terms B^i kept as formal
bilinears in placeholders D_K v^a so callers can substitute any variation.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import UnsupportedOrder
from ..jetspace import SymbolKind
from .. import expr as ex
from ..jetgeo import HorizontalForm, SourceForm, total_derivative, total_derivative_multi


class Lagrangian:
    """A degree-n horizontal form (single top coefficient) on one chart."""

    def __init__(self, space, density, chart_id=None):
        self.space = space
        self.density = density
        self.chart_id = chart_id

    @classmethod
    def from_form(cls, form, chart_id=None):
        return cls(form.space, form.top_coefficient, chart_id)

    def as_form(self):
        return HorizontalForm.top(self.space, self.density)

    def order(self):
        return self.density.max_jet_order()

    def is_zero(self):
        return self.density.is_zero()

    def __str__(self):
        names = self.space.base_names
        wedge = "^".join(f"d{nm}" for nm in names)
        return f"({ex.to_grammar(self.density)}) {wedge}"

    __repr__ = __str__


def grouped_jet_partials(e, space):
    """{(a, J) -> de/du^a_J} over the jet symbols present in e."""
    out = {}
    for sym in sorted(e.free_symbols()):
        if sym.kind != SymbolKind.FIELD:
            continue
        d = ex.partial(e, sym)
        if not d.is_zero():
            out[(sym.field_index, sym.jet)] = d
    return out


def euler_lagrange(lagrangian):
    """E_a = sum_J (-1)^|J| D_J (dL/du^a_J); order at most doubles."""
    space = lagrangian.space
    partials = grouped_jet_partials(lagrangian.density, space)
    comps = [ex.ZERO] * space.m
    for (a, jet), d in partials.items():
        term = total_derivative_multi(d, jet, space)
        comps[a - 1] = comps[a - 1] + ex.scale(term, Fraction((-1) ** len(jet)))
    return SourceForm(space, comps)


def ibp_boundary(terms, space):
    """Integrate sum F * D_J v^a by parts.

    terms: iterable of (F: Expression, a: field index, J: multi-index).
    Returns (euler_part, currents) where euler_part[a-1] collects the
    coefficients of v^a and currents[i-1] is a list of (coef, a, K) meaning
    coef * D_K v^a inside the i-th boundary component.
    """
    euler_part = [ex.ZERO] * space.m
    currents = [[] for _ in range(space.n)]
    stack = [(F, a, tuple(J)) for (F, a, J) in terms]
    while stack:
        F, a, J = stack.pop()
        if F.is_zero():
            continue
        if not J:
            euler_part[a - 1] = euler_part[a - 1] + F
            continue
        i = J[-1]
        rest = J[:-1]
        currents[i - 1].append((F, a, rest))
        stack.append((ex.scale(total_derivative(F, i, space), Fraction(-1)), a, rest))
    return euler_part, currents


def substitute_variation(currents, space, variation):
    """Replace the D_K v^a placeholders in IBP boundary data.

    variation(a, K) must return the expression standing for D_K v^a.
    Returns the n components of the boundary current.
    """
    comps = []
    for entries in currents:
        total = ex.ZERO
        for coef, a, K in entries:
            total = total + coef * variation(a, K)
        comps.append(total)
    return comps


def first_variation(lagrangian):
    """Source form plus boundary-current data of the first variation of L.

    Returns (source, currents) with source the Euler-Lagrange form and
    currents the IBP boundary bilinears (to be contracted with a variation).
    """
    space = lagrangian.space
    partials = grouped_jet_partials(lagrangian.density, space)
    terms = [(d, a, jet) for (a, jet), d in partials.items()]
    euler_part, currents = ibp_boundary(terms, space)
    return SourceForm(space, euler_part), currents


def momentum_current(lagrangian, variation, max_order=2):
    """Boundary current of the first variation, contracted with a variation.

    The explicit momentum realisation is implemented through second order;
    higher orders need Lepage-equivalent theory that is out of scope here.
    """
    if lagrangian.order() > max_order:
        raise UnsupportedOrder(
            f"momentum formulas implemented through order {max_order};"
            f" got order {lagrangian.order()}"
        )
    _, currents = first_variation(lagrangian)
    return substitute_variation(currents, lagrangian.space, variation)
