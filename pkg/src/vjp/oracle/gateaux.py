"""Gateaux-derivative check: action derivative vs Euler-Lagrange pairing.

|d/ds A(sigma + s*delta)|_{s=0} - integral E_a(j sigma) delta^a| / scale,
with the action derivative from central differences in s over the sampled
section and the pairing from the symbolic Euler-Lagrange output evaluated
on finite-difference jets of the section. The probe variation is the
oracle's own instrument with a known closed form, so its jets are supplied
analytically (hand-coded, orders 0..2); the unknown section side always
goes through finite differences.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import MathError
from .. import expr as ex
from ..varcalc import euler_lagrange
from .sampled import SampledSection


@dataclass
class GateauxResult:
    residual: float
    action_derivative: float
    pairing: float
    grid_warning: bool = False

    def __float__(self):
        return self.residual


class BumpVariation:
    """Compactly supported bump exp(1 - 1/(1 - rho^2)), truncated at rho = 1.

    rho^2 = sum ((x_i - c_i)/h_i)^2 over the box; the profile and all
    derivatives vanish at the support edge, keeping the trapezoid rule
    spectrally accurate. Derivatives through second order are closed-form.
    """

    def __init__(self, section, amplitudes=None, width=0.8):
        space = section.space
        self.space = space
        self.amplitudes = list(amplitudes or [1.0] * space.m)
        self.centers = [0.5 * (a + b) for (a, b) in section.box]
        self.halves = [0.5 * (b - a) * width for (a, b) in section.box]
        self.scaled = [
            (section.grid[space.base_symbol(i + 1)] - self.centers[i]) / self.halves[i]
            for i in range(space.n)
        ]
        q = np.zeros(section.shape)
        for s in self.scaled:
            q = q + s**2
        self.inside = q < 1.0
        self.q = q
        one_minus = np.where(self.inside, 1.0 - q, 1.0)
        profile = np.zeros(section.shape)
        profile[self.inside] = np.exp(1.0 - 1.0 / one_minus[self.inside])
        self.profile = profile
        # dB/dq = -B/(1-q)^2, d2B/dq2 = B*((1-q)^-4 - 2(1-q)^-3) on the support
        self.dB = np.where(self.inside, -profile / one_minus**2, 0.0)
        self.d2B = np.where(
            self.inside, profile * (1.0 / one_minus**4 - 2.0 / one_minus**3), 0.0
        )

    def profile_jet(self, jet):
        """d_J of the scalar profile for |J| <= 2 (closed form)."""
        jet = tuple(sorted(jet))
        if len(jet) == 0:
            return self.profile
        if len(jet) == 1:
            i = jet[0] - 1
            return self.dB * 2.0 * self.scaled[i] / self.halves[i]
        if len(jet) == 2:
            i, j = jet[0] - 1, jet[1] - 1
            out = (
                self.d2B
                * 4.0
                * self.scaled[i]
                * self.scaled[j]
                / (self.halves[i] * self.halves[j])
            )
            if i == j:
                out = out + self.dB * 2.0 / self.halves[i] ** 2
            return out
        raise MathError("bump variation jets implemented through order 2")

    def jet(self, a, jet):
        return self.amplitudes[a - 1] * self.profile_jet(jet)

    def values(self, a):
        return self.amplitudes[a - 1] * self.profile


def bump_variation(section, amplitudes=None, width=0.8):
    return BumpVariation(section, amplitudes, width)


def gateaux_check(lagrangian, section, variation=None, s=1e-3, warn_tol=1e-5):
    """Residual of the first-variation identity on a sampled section.

    The Lagrangian order must be <= 2 (the variation carries closed-form
    jets that far). Returns residual, both sides, and a grid warning when a
    coarser grid reproduces the answer better than the configured one.
    """
    space = lagrangian.space
    if variation is None:
        variation = BumpVariation(section)
    order = lagrangian.order()
    if order > 2:
        raise MathError("gateaux_check supports Lagrangians of order <= 2")
    eta = euler_lagrange(lagrangian)
    eta_order = (
        max(c.max_jet_order() for c in eta.components) if not eta.is_zero() else 0
    )

    def env_with_variation(sec, var, shift):
        env = dict(sec.grid)
        for a in range(1, space.m + 1):
            for jet in space.multi_indices(order):
                env[space.jet_symbol(a, jet)] = sec.jet(a, jet) + shift * var.jet(
                    a, jet
                )
        return env

    def one_pass(sec, var):
        dens_plus = np.asarray(
            ex.evaluate(lagrangian.density, env_with_variation(sec, var, +s)),
            dtype=float,
        ) * np.ones(sec.shape)
        dens_minus = np.asarray(
            ex.evaluate(lagrangian.density, env_with_variation(sec, var, -s)),
            dtype=float,
        ) * np.ones(sec.shape)
        d_action = (sec.integrate(dens_plus, order) - sec.integrate(dens_minus, order)) / (
            2.0 * s
        )
        env = sec.environment(max(eta_order, order))
        pairing_density = np.zeros(sec.shape)
        for a in range(1, space.m + 1):
            comp = eta.components[a - 1]
            if comp.is_zero():
                continue
            vals = np.asarray(ex.evaluate(comp, env), dtype=float) * np.ones(sec.shape)
            pairing_density = pairing_density + vals * var.values(a)
        pairing = sec.integrate(pairing_density, max(eta_order, order))
        scale = max(1.0, abs(d_action), abs(pairing))
        return d_action, pairing, abs(d_action - pairing) / scale

    d_action, pairing, residual = one_pass(section, variation)
    grid_warning = False
    if isinstance(variation, BumpVariation) and all(n >= 64 for n in section.shape):
        half = tuple(slice(None, None, 2) for _ in section.shape)
        coarse = SampledSection(
            space,
            section.box,
            values=[v[half] for v in section.values],
            axes=[ax[::2] for ax in section.axes],
        )
        _, _, coarse_residual = one_pass(coarse, BumpVariation(coarse, variation.amplitudes))
        if coarse_residual < residual / 2 and residual > warn_tol:
            grid_warning = True
    return GateauxResult(residual, d_action, pairing, grid_warning)
