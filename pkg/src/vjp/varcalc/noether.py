"""Noether current families for symmetries of locally variational equations.

For an equation symmetry Xi (L_Xi eta = 0) and a local Lagrangian lambda_i
presenting eta:

    epsilon_i              canonical current (first-variation boundary term)
    beta_i                 potential of L_Xi lambda_i (local)
    nu_i                   potential of Xi_V -| eta (local)
    epsilon_i - beta_i     the conserved current of the pair (eta, Xi)
    nu_i + epsilon_i       strong current; d_H(nu_i+epsilon_i) = d_H beta_i

All outputs carry symbolic certificates checked with equals().
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import MathError
from .. import expr as ex
from ..expr.equality import equals, is_zero
from ..jetgeo import HorizontalForm, dH
from .euler import Lagrangian, euler_lagrange
from .helmholtz import helmholtz_check
from .homotopy import dH_homotopy
from .lie import lie_derivative_lagrangian, lie_derivative_source


@dataclass
class NoetherData:
    xi: object
    is_lagrangian_symmetry: bool
    is_equation_symmetry: bool
    lie_lagrangian: HorizontalForm
    epsilon: HorizontalForm
    beta: HorizontalForm | None = None
    nu: HorizontalForm | None = None
    certificates: dict | None = None

    @property
    def bessel_hagen(self):
        if self.beta is None:
            return None
        return self.epsilon - self.beta

    @property
    def strong(self):
        if self.nu is None:
            return None
        return self.nu + self.epsilon


def noether_data(xi, lagrangian, eta, fiber_center=None, base_center=None, rng=None):
    """The full current family of one symmetry on one chart.

    For equation symmetries all four currents and both certificates are
    populated; for a non-symmetry only the classification and epsilon are.
    """
    lag_sym, eq_sym, lie_l, epsilon = classify_symmetry(xi, lagrangian, eta, rng=rng)
    data = NoetherData(xi, lag_sym, eq_sym, lie_l, epsilon)
    if not eq_sym:
        return data
    space = lagrangian.space
    if lag_sym:
        data.beta = HorizontalForm.zero(space, space.n - 1)
    else:
        data.beta = dH_homotopy(
            lie_l, fiber_center=fiber_center, base_center=base_center, rng=rng
        )
    contraction = eta.contract(xi.vertical_components())
    data.nu = dH_homotopy(
        contraction, fiber_center=fiber_center, base_center=base_center, rng=rng
    )
    conserved = equals(
        contraction.top_coefficient + dH(data.bessel_hagen).top_coefficient,
        ex.ZERO,
        rng=rng,
    )
    equivalent = equals(
        dH(data.strong).top_coefficient, dH(data.beta).top_coefficient, rng=rng
    )
    data.certificates = {
        "on_shell_conserved": bool(conserved),
        "strong_equivalent_to_beta": bool(equivalent),
    }
    return data


def classify_symmetry(xi, lagrangian, eta, rng=None):
    """(is_lagrangian_symmetry, is_equation_symmetry, L_Xi lambda, epsilon)."""
    lie_l, epsilon = lie_derivative_lagrangian(xi, lagrangian)
    lag_sym = bool(is_zero(lie_l.top_coefficient, rng=rng))
    lie_eta = lie_derivative_source(xi, eta, check=False, rng=rng)
    eq_sym = all(bool(is_zero(c, rng=rng)) for c in lie_eta.components)
    return lag_sym, eq_sym, lie_l, epsilon


def noether_bessel_hagen_current(
    xi, lagrangian, eta, fiber_center=None, base_center=None, rng=None
):
    """epsilon_i - beta_i with its on-shell conservation certificate.

    Requires an equation symmetry; beta_i is constructed by the fiber
    homotopy from L_Xi lambda_i (variationally trivial exactly when the
    symmetry condition holds).
    """
    lag_sym, eq_sym, lie_l, epsilon = classify_symmetry(xi, lagrangian, eta, rng=rng)
    if not eq_sym:
        raise MathError("Xi is not a symmetry of the source form")
    if lag_sym:
        beta = HorizontalForm.zero(lagrangian.space, lagrangian.space.n - 1)
    else:
        beta = dH_homotopy(
            lie_l, fiber_center=fiber_center, base_center=base_center, rng=rng
        )
    current = epsilon - beta
    contraction = eta.contract(xi.vertical_components())
    residual = contraction.top_coefficient + dH(current).top_coefficient
    certificate = equals(residual, ex.ZERO, rng=rng)
    return current, beta, bool(certificate)


def strong_noether_current(
    xi, lagrangian, eta, fiber_center=None, base_center=None, rng=None
):
    """nu_i + epsilon_i, certifying d_H(nu_i + epsilon_i) = d_H(beta_i)."""
    _, eq_sym, lie_l, epsilon = classify_symmetry(xi, lagrangian, eta, rng=rng)
    if not eq_sym:
        raise MathError("Xi is not a symmetry of the source form")
    contraction = eta.contract(xi.vertical_components())
    nu = dH_homotopy(
        contraction, fiber_center=fiber_center, base_center=base_center, rng=rng
    )
    strong = nu + epsilon
    lag_sym = bool(is_zero(lie_l.top_coefficient, rng=rng))
    if lag_sym:
        beta = HorizontalForm.zero(lagrangian.space, lagrangian.space.n - 1)
    else:
        beta = dH_homotopy(
            lie_l, fiber_center=fiber_center, base_center=base_center, rng=rng
        )
    certificate = equals(
        dH(strong).top_coefficient, dH(beta).top_coefficient, rng=rng
    )
    return strong, nu, bool(certificate)


def admissibility_checks(xi_by_chart, lagrangians, overlaps=None, rng=None):
    """Per-chart L_Xi L_Xi lambda_i = 0 and per-overlap L_Xi(mu_ij) = 0.

    xi_by_chart: {chart_id: ProjectableVectorField} (the chart
    representations of one global field); lagrangians: {chart_id:
    Lagrangian}; overlaps: {(i, j): HorizontalForm} holding mu_ij already
    expressed on chart i. The first flag makes d_H nu_i global; the second
    makes d_H beta_i global and yields the conservation law
    d_H L_Xi(nu_i + epsilon_i) = 0.
    """
    lxlx_zero = True
    for chart_id, lag in lagrangians.items():
        xi = xi_by_chart[chart_id]
        lie1, _ = lie_derivative_lagrangian(xi, lag)
        lie2, _ = lie_derivative_lagrangian(
            xi, Lagrangian(lag.space, lie1.top_coefficient, chart_id)
        )
        if not is_zero(lie2.top_coefficient, rng=rng):
            lxlx_zero = False
            break
    lxd_zero = True
    if overlaps:
        for (i, j), mu in overlaps.items():
            space = mu.space
            lie_mu, _ = lie_derivative_lagrangian(
                xi_by_chart[i], Lagrangian(space, mu.top_coefficient, i)
            )
            if not is_zero(lie_mu.top_coefficient, rng=rng):
                lxd_zero = False
                break
    out = {"LXLX_lambda_zero": lxlx_zero, "LX_coboundary_zero": lxd_zero}
    consequences = []
    if lxlx_zero:
        consequences.append("d_H(nu_i) glues to a global form")
    if lxd_zero:
        consequences.append(
            "d_H(beta_i) glues to a global form; the variation of the strong"
            " current is conserved: d_H L_Xi(nu_i + epsilon_i) = 0"
        )
    out["consequences"] = consequences
    return out
