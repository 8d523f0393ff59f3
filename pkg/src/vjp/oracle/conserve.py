"""On-shell conservation checks along numerically integrated solutions.

The mechanics case (n = 1) integrates E_a(j sigma) = 0 with a classical
fourth-order Runge-Kutta step, solving the (affine) acceleration block per
evaluation; a current is conserved when its drift along the trajectory
stays at integrator noise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import IntegratorStepFailure, MathError
from ..jetspace import SymbolKind
from .. import expr as ex


@dataclass
class ConservationResult:
    drift: float
    initial: float
    samples: int

    def __float__(self):
        return self.drift


class MechanicalSystem:
    """Accelerations from a second-order source form affine in u_tt."""

    def __init__(self, eta):
        space = eta.space
        if space.n != 1:
            raise MathError("the integrator path needs a one-dimensional base")
        self.space = space
        self.m = space.m
        self.tsym = space.base_symbol(1)
        self.u_syms = [space.field_symbol(a) for a in range(1, self.m + 1)]
        self.du_syms = [space.jet_symbol(a, (1,)) for a in range(1, self.m + 1)]
        self.ddu_syms = [space.jet_symbol(a, (1, 1)) for a in range(1, self.m + 1)]
        for comp in eta.components:
            if comp.max_jet_order() > 2:
                raise MathError("integrator supports source forms of order <= 2")
        self.mass = [
            [ex.partial(comp, dd) for dd in self.ddu_syms] for comp in eta.components
        ]
        for row in self.mass:
            for entry in row:
                for dd in self.ddu_syms:
                    if not ex.partial(entry, dd).is_zero():
                        raise MathError(
                            "source form is not affine in the accelerations"
                        )
        zero_acc = {dd: ex.ZERO for dd in self.ddu_syms}
        self.force = [ex.substitute(c, zero_acc) for c in eta.components]

    def _env(self, t, q, dq):
        env = {self.tsym: t}
        env.update({s: v for s, v in zip(self.u_syms, q)})
        env.update({s: v for s, v in zip(self.du_syms, dq)})
        return env

    def acceleration(self, t, q, dq):
        env = self._env(t, q, dq)
        M = np.array(
            [[float(ex.evaluate(e, env)) for e in row] for row in self.mass]
        )
        f = np.array([float(ex.evaluate(e, env)) for e in self.force])
        try:
            return np.linalg.solve(M, -f)
        except np.linalg.LinAlgError as err:
            raise IntegratorStepFailure(
                f"singular acceleration block at t={t}"
            ) from err


def integrate_trajectory(eta, initial_position, initial_velocity, t0=0.0, t1=10.0, step=1e-3):
    """Classical RK4 on the first-order reduction of E(j sigma) = 0."""
    sys = MechanicalSystem(eta)
    q = np.asarray(initial_position, dtype=float)
    dq = np.asarray(initial_velocity, dtype=float)
    steps = int(round((t1 - t0) / step))
    ts = np.empty(steps + 1)
    qs = np.empty((steps + 1, sys.m))
    dqs = np.empty((steps + 1, sys.m))
    ts[0], qs[0], dqs[0] = t0, q, dq
    t = t0
    for k in range(steps):
        k1q, k1v = dq, sys.acceleration(t, q, dq)
        k2q, k2v = dq + 0.5 * step * k1v, sys.acceleration(
            t + 0.5 * step, q + 0.5 * step * k1q, dq + 0.5 * step * k1v
        )
        k3q, k3v = dq + 0.5 * step * k2v, sys.acceleration(
            t + 0.5 * step, q + 0.5 * step * k2q, dq + 0.5 * step * k2v
        )
        k4q, k4v = dq + step * k3v, sys.acceleration(
            t + step, q + step * k3q, dq + step * k3v
        )
        q = q + (step / 6.0) * (k1q + 2 * k2q + 2 * k3q + k4q)
        dq = dq + (step / 6.0) * (k1v + 2 * k2v + 2 * k3v + k4v)
        t = t0 + (k + 1) * step
        if not (np.all(np.isfinite(q)) and np.all(np.isfinite(dq))):
            raise IntegratorStepFailure(f"trajectory blew up at t={t}")
        ts[k + 1], qs[k + 1], dqs[k + 1] = t, q, dq
    return sys, ts, qs, dqs


def conservation_check(
    current,
    eta,
    initial_position,
    initial_velocity,
    t0=0.0,
    t1=10.0,
    step=1e-3,
    sample_every=10,
):
    """Max |current(t) - current(0)| along the integrated solution.

    current: a degree-0 horizontal form (mechanics current) or a bare
    expression of jet order <= 2; accelerations along the trajectory are
    recomputed from the source form where the current needs them.
    """
    expr = current if isinstance(current, ex.Expression) else current.coefficient(())
    sys, ts, qs, dqs = integrate_trajectory(
        eta, initial_position, initial_velocity, t0, t1, step
    )
    order = expr.max_jet_order()
    if order > 2:
        raise MathError("currents of jet order > 2 unsupported on trajectories")
    idx = range(0, len(ts), max(1, sample_every))
    vals = []
    for k in idx:
        env = sys._env(ts[k], qs[k], dqs[k])
        if order >= 2:
            acc = sys.acceleration(ts[k], qs[k], dqs[k])
            env.update({s: a for s, a in zip(sys.ddu_syms, acc)})
        vals.append(float(ex.evaluate(expr, env)))
    vals = np.asarray(vals)
    return ConservationResult(float(np.max(np.abs(vals - vals[0]))), float(vals[0]), len(vals))
