"""Vainberg-Tonti local Lagrangian: the constructive inverse of E_n.

L = (u - c)^a * integral_0^1 E_a(x, c + t(u - c), t u_J ...) dt

about a fiber center c (chart data; default the fiber origin). The scaling
substitution commutes with total derivatives, which is what makes the
Euler-Lagrange round-trip exact on star-shaped chart fibers.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import HelmholtzFailed
from ..jetspace import HOMOTOPY, SymbolKind
from .. import expr as ex
from ..expr.integrate import integrate_t
from .euler import Lagrangian
from .helmholtz import helmholtz_check


def scaling_substitution(space, symbols, center=None):
    """u^a -> c^a + t(u^a - c^a), u^a_J -> t u^a_J for the jets present."""
    t = ex.from_symbol(HOMOTOPY)
    center = center or {}
    subs = {}
    for sym in symbols:
        if sym.kind != SymbolKind.FIELD:
            continue
        if sym.order == 0:
            c = ex.from_fraction(center.get(sym.field_index, Fraction(0)))
            subs[sym] = c + t * (ex.from_symbol(sym) - c)
        else:
            subs[sym] = t * ex.from_symbol(sym)
    return subs


def tonti_lagrangian(eta, center=None, check=True, rng=None):
    """The Tonti Lagrangian of a Helmholtz-passing source form.

    center maps field index -> Fraction (fiber point, chart data). With
    check=True a failing Helmholtz test refuses to fabricate a Lagrangian.
    """
    if check:
        result = helmholtz_check(eta, rng=rng)
        if not result:
            raise HelmholtzFailed(
                "source form fails the Helmholtz conditions; refusing the"
                f" Tonti construction (first residual at {result.worst()[0]})"
            )
    space = eta.space
    center = dict(center or {})
    integrand = ex.ZERO
    for a in range(1, space.m + 1):
        comp = eta.components[a - 1]
        if comp.is_zero():
            continue
        subs = scaling_substitution(space, comp.free_symbols(), center)
        scaled = ex.substitute(comp, subs)
        c = ex.from_fraction(center.get(a, Fraction(0)))
        integrand = integrand + (ex.from_symbol(space.field_symbol(a)) - c) * scaled
    return Lagrangian(space, integrate_t(integrand))
