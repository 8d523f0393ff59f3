"""Variational Lie derivatives and the first-variation (Noether) split.

For a projectable field the prolonged action on a Lagrangian splits as

    L_Xi lambda = Xi_V -| eta_lambda + d_H epsilon

with epsilon^i = Xi^i L + B^i[Xi_V] built from the same integration-by-parts
boundary terms as the Euler-Lagrange derivation, so the identity holds
exactly by construction. On source forms the quotient Cartan formula for
closed eta reduces the Lie derivative to E_n of the contraction Lagrangian.
"""

from __future__ import annotations

from ..errors import HelmholtzFailed, UnsupportedOrder
from .. import expr as ex
from ..jetgeo import HorizontalForm, current_from_components, total_derivative
from .euler import (
    Lagrangian,
    euler_lagrange,
    first_variation,
    grouped_jet_partials,
    substitute_variation,
)
from .helmholtz import helmholtz_check

MAX_MOMENTUM_ORDER = 2


def lie_derivative_lagrangian(xi, lagrangian):
    """(L_Xi lambda, epsilon): the variational Lie derivative and canonical
    Noether current of a projectable symmetry generator.

    Restricted to Lagrangians of order <= 2: the explicit momentum formulas
    stop there and higher orders require Lepage-equivalent machinery.
    """
    if lagrangian.order() > MAX_MOMENTUM_ORDER:
        raise UnsupportedOrder(
            f"variational Lie derivative implemented through order"
            f" {MAX_MOMENTUM_ORDER}; got {lagrangian.order()}"
        )
    space = lagrangian.space
    L = lagrangian.density
    vertical = xi.vertical_components()

    # L_Xi lambda = D_i(Xi^i L) + pr(Xi_V) L    (projectable split)
    lie_density = ex.ZERO
    for i in range(1, space.n + 1):
        c = xi.base_components[i - 1]
        if not c.is_zero():
            lie_density = lie_density + total_derivative(c * L, i, space)
    partials = grouped_jet_partials(L, space)
    vert_jets = {}

    def vert_prolonged(a, K):
        if (a, K) not in vert_jets:
            e = vertical[a - 1]
            from ..jetgeo import total_derivative_multi

            vert_jets[(a, K)] = total_derivative_multi(e, K, space)
        return vert_jets[(a, K)]

    for (a, jet), d in partials.items():
        lie_density = lie_density + vert_prolonged(a, jet) * d

    _, currents = first_variation(lagrangian)
    boundary = substitute_variation(currents, space, vert_prolonged)
    eps_comps = [
        xi.base_components[i - 1] * L + boundary[i - 1] for i in range(1, space.n + 1)
    ]
    epsilon = current_from_components(space, eps_comps)
    return HorizontalForm.top(space, lie_density), epsilon


def lie_derivative_source(xi, eta, check=True, rng=None):
    """L_Xi eta = E_n((Xi_V -| eta)) for Helmholtz-closed source forms."""
    if check:
        result = helmholtz_check(eta, rng=rng)
        if not result:
            raise HelmholtzFailed(
                "the quotient Cartan formula needs a Helmholtz-closed source form"
            )
    contraction = eta.contract(xi.vertical_components())
    return euler_lagrange(Lagrangian(eta.space, contraction.top_coefficient))
