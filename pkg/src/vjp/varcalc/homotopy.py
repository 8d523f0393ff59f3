"""Constructive potential for variationally trivial top-degree forms.

Strategy (chart star-shaped about its center): scale the fiber by the
homotopy parameter and integrate the boundary terms of the first-variation
identity -- the Euler part vanishes because E_n(omega) = 0 -- then absorb
the purely base-dependent remainder with a radial (cone) homotopy about the
chart's base center. The candidate is verified against d_H before it is
returned; a failing candidate means the chart violates star-shapedness and
is reported as such rather than silently returned.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import DivisionByZeroExpression, NotVariationallyTrivial
from ..jetspace import HOMOTOPY, SymbolKind
from .. import expr as ex
from ..expr.equality import equals, is_zero
from ..expr.integrate import integrate_t
from ..jetgeo import HorizontalForm, SourceForm, current_from_components, dH
from .euler import Lagrangian, euler_lagrange, grouped_jet_partials, ibp_boundary, substitute_variation
from .tonti import scaling_substitution


def _fiber_homotopy_current(space, density, center):
    """Boundary current of integral d/dt L(x, scaled) dt; Euler part must die."""
    partials = grouped_jet_partials(density, space)
    terms = []
    for (a, jet), d in partials.items():
        subs = scaling_substitution(space, d.free_symbols(), center)
        terms.append((ex.substitute(d, subs), a, jet))
    euler_part, currents = ibp_boundary(terms, space)

    def variation(a, K):
        if K:
            return ex.from_symbol(space.jet_symbol(a, K))
        c = ex.from_fraction(center.get(a, Fraction(0)))
        return ex.from_symbol(space.field_symbol(a)) - c

    comps = substitute_variation(currents, space, variation)
    comps = [integrate_t(c) for c in comps]
    residual = ex.ZERO
    for a in range(1, space.m + 1):
        residual = residual + variation(a, ()) * euler_part[a - 1]
    return comps, residual


def _radial_base_potential(space, density, base_center):
    """Cone homotopy for a purely base-dependent top form."""
    t = ex.from_symbol(HOMOTOPY)
    subs = {}
    shifted = {}
    for i in range(1, space.n + 1):
        x = space.base_symbol(i)
        c = ex.from_fraction(base_center.get(i, Fraction(0)))
        subs[x] = c + t * (ex.from_symbol(x) - c)
        shifted[i] = ex.from_symbol(x) - c
    scaled = ex.substitute(density, subs)
    comps = []
    for i in range(1, space.n + 1):
        integrand = shifted[i] * scaled * ex.pow_int(t, space.n - 1)
        comps.append(integrate_t(integrand))
    return comps


def dH_homotopy(form, fiber_center=None, base_center=None, check=True, rng=None):
    """A degree n-1 potential nu with dH(nu) = form, for E_n(form) = 0.

    fiber_center / base_center: {index -> Fraction}, the chart's star center.
    Raises NotVariationallyTrivial when E_n(form) != 0, or when the verified
    candidate fails (chart not star-shaped about the center).
    """
    space = form.space
    if form.degree != space.n:
        raise NotVariationallyTrivial("the homotopy applies to top-degree forms")
    density = form.top_coefficient
    if density.is_zero():
        return HorizontalForm.zero(space, space.n - 1)
    fiber_center = dict(fiber_center or {})
    base_center = dict(base_center or {})
    if check:
        eta = euler_lagrange(Lagrangian(space, density))
        for comp in eta.components:
            if not is_zero(comp, rng=rng):
                raise NotVariationallyTrivial(
                    "E_n(omega) != 0: the form admits no local potential"
                )
    try:
        comps, residual = _fiber_homotopy_current(space, density, fiber_center)
        if not residual.is_zero() and not is_zero(
            integrate_t(residual), rng=rng
        ):
            raise NotVariationallyTrivial(
                "fiber homotopy left a nonzero Euler part; inconsistent input"
            )
        # remainder: the density frozen at the fiber center (a base function)
        freeze = {}
        for sym in density.free_symbols():
            if sym.kind == SymbolKind.FIELD:
                if sym.order == 0:
                    freeze[sym] = ex.from_fraction(
                        fiber_center.get(sym.field_index, Fraction(0))
                    )
                else:
                    freeze[sym] = ex.ZERO
        base_density = ex.substitute(density, freeze)
    except DivisionByZeroExpression as err:
        raise NotVariationallyTrivial(
            "form is singular along the homotopy to the configured center;"
            " the chart is not star-shaped about it"
        ) from err
    if not base_density.is_zero():
        radial = _radial_base_potential(space, base_density, base_center)
        comps = [a + b for a, b in zip(comps, radial)]
    nu = current_from_components(space, comps)
    verdict = equals(dH(nu).top_coefficient, density, rng=rng)
    if not verdict:
        raise NotVariationallyTrivial(
            "candidate potential fails dH(nu) = omega on this chart;"
            " the domain is not star-shaped about the configured center"
        )
    return nu
