"""Jet-calculus operators: total derivatives, the horizontal differential,
vector-field prolongation, and pullback along sections."""

from __future__ import annotations

from fractions import Fraction

from ..errors import DegreeError, MathError, SchemaError
from ..jetspace import SymbolKind
from .. import expr as ex
from .forms import GeneralForm, HorizontalForm, _symbol_leg


def total_derivative(e, i, space):
    """D_i e = de/dx^i + sum over jets u^a_{J+i} * de/du^a_J.

    Raises the jet order by one; errors past the hard order cap.
    """
    out = ex.partial(e, space.base_symbol(i))
    for sym in sorted(e.free_symbols()):
        if sym.kind != SymbolKind.FIELD:
            continue
        d = ex.partial(e, sym)
        if d.is_zero():
            continue
        out = out + ex.from_symbol(space.raise_jet(sym, i)) * d
    return out


def total_derivative_multi(e, jet, space):
    for i in jet:
        e = total_derivative(e, i, space)
    return e


def dH(form):
    """Horizontal differential; zero on top degree, raises jet order by one."""
    space = form.space
    if form.degree == space.n:
        return HorizontalForm.zero(space, space.n)
    out = HorizontalForm.zero(space, form.degree + 1)
    for subset, e in form.coeffs.items():
        for i in range(1, space.n + 1):
            if i in subset:
                continue
            new = tuple(sorted(subset + (i,)))
            sign = Fraction((-1) ** new.index(i))
            cur = out.coeffs.get(new, ex.ZERO) + ex.scale(
                total_derivative(e, i, space), sign
            )
            if cur.is_zero():
                out.coeffs.pop(new, None)
            else:
                out.coeffs[new] = cur
    return out


def horizontalize(form):
    """Quotient projection of a general form; see GeneralForm.horizontalize.

    Degree n+1 input projects to the zero horizontal form (more than n base
    differentials always repeat); higher degrees are out of scope.
    """
    if form.degree > form.space.n + 1:
        raise DegreeError(
            f"degree {form.degree} exceeds the top horizontal degree; out of scope"
        )
    return form.horizontalize()


class ProjectableVectorField:
    """Xi = Xi^i(x) d/dx^i + Xi^a(x,u) d/du^a with jet prolongations.

    Base components may depend on base coordinates only (projectability);
    fiber components on base and zeroth-order fields.
    """

    def __init__(self, space, base_components, fiber_components):
        base_components = list(base_components)
        fiber_components = list(fiber_components)
        if len(base_components) != space.n or len(fiber_components) != space.m:
            raise SchemaError("vector field component count mismatch")
        for c in base_components:
            bad = [
                s
                for s in c.free_symbols()
                if s.kind == SymbolKind.FIELD or s.kind == SymbolKind.PARAM
            ]
            if bad:
                raise SchemaError(
                    "projectable field: base components must depend on base coordinates only"
                )
        for c in fiber_components:
            bad = [
                s
                for s in c.free_symbols()
                if (s.kind == SymbolKind.FIELD and s.order > 0)
                or s.kind == SymbolKind.PARAM
            ]
            if bad:
                raise SchemaError(
                    "fiber components may depend on base and zeroth-order field coordinates only"
                )
        self.space = space
        self.base_components = base_components
        self.fiber_components = fiber_components

    def is_zero(self):
        return all(c.is_zero() for c in self.base_components) and all(
            c.is_zero() for c in self.fiber_components
        )

    def vertical_components(self):
        """Xi_V^a = Xi^a - u^a_i Xi^i."""
        out = []
        for a in range(1, self.space.m + 1):
            v = self.fiber_components[a - 1]
            for i in range(1, self.space.n + 1):
                v = v - ex.from_symbol(self.space.jet_symbol(a, (i,))) * self.base_components[
                    i - 1
                ]
            out.append(v)
        return out

    def prolonged_component(self, a, jet):
        """Xi^a_J = D_J(Xi_V^a) + u^a_{J+k} Xi^k (projectable prolongation)."""
        jet = tuple(sorted(jet))
        if not jet:
            return self.fiber_components[a - 1]
        vert = total_derivative_multi(
            self.vertical_components()[a - 1], jet, self.space
        )
        out = vert
        for k in range(1, self.space.n + 1):
            if self.base_components[k - 1].is_zero():
                continue
            out = out + ex.from_symbol(
                self.space.jet_symbol(a, jet + (k,))
            ) * self.base_components[k - 1]
        return out

    def prolong(self, order):
        """All prolonged components Xi^a_J for |J| <= order."""
        out = {}
        for a in range(1, self.space.m + 1):
            for jet in self.space.multi_indices(order):
                out[(a, jet)] = self.prolonged_component(a, jet)
        return out

    def apply(self, e, order=None):
        """The prolonged field acting on a function (jet-space derivation)."""
        if order is None:
            order = e.max_jet_order()
        out = ex.ZERO
        for i in range(1, self.space.n + 1):
            d = ex.partial(e, self.space.base_symbol(i))
            if not d.is_zero():
                out = out + self.base_components[i - 1] * d
        for sym in sorted(e.free_symbols()):
            if sym.kind != SymbolKind.FIELD:
                continue
            d = ex.partial(e, sym)
            if d.is_zero():
                continue
            out = out + self.prolonged_component(sym.field_index, sym.jet) * d
        return out


class Section:
    """A local section u^a = sigma^a(x) on one chart."""

    def __init__(self, space, chart_id, components):
        components = list(components)
        if len(components) != space.m:
            raise SchemaError("section component count mismatch")
        for c in components:
            bad = [s for s in c.free_symbols() if s.kind == SymbolKind.FIELD]
            if bad:
                raise SchemaError("section components must contain base coordinates only")
        self.space = space
        self.chart_id = chart_id
        self.components = components

    def jet_value(self, a, jet):
        """d_J sigma^a as an expression over base coordinates."""
        e = self.components[a - 1]
        for i in jet:
            e = ex.partial(e, self.space.base_symbol(i))
        return e

    def substitution(self, max_order):
        subs = {}
        for a in range(1, self.space.m + 1):
            for jet in self.space.multi_indices(max_order):
                subs[self.space.jet_symbol(a, jet)] = self.jet_value(a, jet)
        return subs


def pullback_section(form, section):
    """jsigma^* of a horizontal or general form: a form on the base X."""
    space = form.space
    if isinstance(form, HorizontalForm):
        subs = section.substitution(max(form.max_jet_order(), 0))
        out = GeneralForm(space, form.degree)
        for subset, e in form.coeffs.items():
            out.add_term(
                tuple(("x", i) for i in subset), ex.substitute(e, subs)
            )
        return out
    if isinstance(form, GeneralForm):
        max_order = 0
        for legs, e in form.coeffs.items():
            max_order = max(max_order, e.max_jet_order())
            for leg in legs:
                if leg[0] == "u":
                    max_order = max(max_order, len(leg[2]))
        subs = section.substitution(max_order)
        mapping = {}
        for i in range(1, space.n + 1):
            mapping[space.base_symbol(i)] = ex.from_symbol(space.base_symbol(i))
        mapping.update(subs)
        return form.pullback(mapping, space)
    raise MathError(f"cannot pull back {type(form).__name__} along a section")


def base_exterior_d(form):
    """Exterior d of a base-coordinates-only general form (forms on X)."""
    return form.exterior_d()
