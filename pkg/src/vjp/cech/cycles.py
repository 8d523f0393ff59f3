"""Cycles as piecewise-chart parameterizations and their periods.

A k-cycle is a list of legs, each a smooth map [0,1]^k -> chart coordinates
(expressions in parameters s1..sk). Faces of adjacent legs are identified
through transition maps; closedness is certified numerically at sampled
boundary points within the quadrature tolerance. Periods integrate a closed
form leg by leg with tensor Gauss-Legendre quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import CycleNotClosed, MathError, SchemaError
from ..jetspace import Symbol, SymbolKind
from .. import expr as ex
from ..expr.quadrature import nquad

_FACE_SAMPLES = 7


class ParamSpace:
    """Coordinate bookkeeping for the [0,1]^k parameter cube."""

    def __init__(self, k):
        self.n = k
        self.base_names = [f"s{d}" for d in range(1, k + 1)]

    def base_symbol(self, d):
        return param_symbol(d)

    def jet_symbol(self, a, jet):  # pragma: no cover - params carry no fields
        raise MathError("parameter space has no field coordinates")


def param_symbol(d):
    return Symbol(SymbolKind.BASE, base_index=d, name=f"s{d}")


@dataclass
class CycleLeg:
    chart_id: str
    mapping: dict  # {coordinate Symbol of the chart space -> Expression in params}
    orientation: int = 1


@dataclass
class FaceMatch:
    """Identification of one leg face with another through the atlas."""

    leg_a: int
    face_a: tuple  # (param index 1..k, side 0|1)
    leg_b: int
    face_b: tuple
    param_map: list = field(default_factory=list)  # exprs in s1..s_{k-1}


class Cycle:
    def __init__(self, cycle_id, dim, legs, faces=(), target="Y"):
        self.id = cycle_id
        self.dim = int(dim)
        self.legs = list(legs)
        self.faces = list(faces)
        self.target = target
        if self.dim < 1:
            raise SchemaError("cycle dimension must be >= 1")

    # -- closedness certificate -------------------------------------------------

    def verify_closed(self, atlas, tol=1e-6):
        """Sample declared face identifications; mismatch raises CycleNotClosed."""
        k = self.dim
        if not self.faces:
            return True
        grid = np.linspace(0.05, 0.95, _FACE_SAMPLES)
        pts = (
            np.stack(np.meshgrid(*([grid] * (k - 1)), indexing="ij"), axis=-1).reshape(
                -1, k - 1
            )
            if k > 1
            else np.zeros((1, 0))
        )
        for match in self.faces:
            leg_a = self.legs[match.leg_a]
            leg_b = self.legs[match.leg_b]
            for row in pts:
                pa = _face_point(row, match.face_a, k)
                if match.param_map:
                    env = {
                        param_symbol(d + 1): row[d] for d in range(k - 1)
                    }
                    mapped = [ex.evaluate(e, env) for e in match.param_map]
                else:
                    mapped = list(row)
                pb = _face_point(np.asarray(mapped), match.face_b, k)
                ca = _eval_leg(leg_a, pa)
                cb = _eval_leg(leg_b, pb)
                if leg_a.chart_id == leg_b.chart_id:
                    cb_in_a = cb
                else:
                    ov = atlas.overlap(leg_b.chart_id, leg_a.chart_id)
                    # chart-a coordinate values of the leg-b point; transition
                    # components needing coordinates the legs do not carry
                    # (e.g. fiber coordinates of a base cycle) stay unchecked
                    cb_in_a = {}
                    for s, image in ov.mapping.items():
                        needed = {
                            f
                            for f in image.free_symbols()
                            if f.kind != SymbolKind.CONST
                        }
                        if needed <= set(cb):
                            cb_in_a[s] = ex.evaluate(image, cb)
                for s, va in ca.items():
                    if s not in cb_in_a:
                        continue
                    vb = cb_in_a[s]
                    if abs(va - vb) > tol * max(1.0, abs(va)):
                        raise CycleNotClosed(
                            f"cycle {self.id!r}: faces {match.face_a}/{match.face_b}"
                            f" of legs {match.leg_a}/{match.leg_b} disagree at"
                            f" {s.display()} ({va} vs {vb})"
                        )
        return True

    # -- periods ------------------------------------------------------------------

    def period(self, form_by_chart, atlas=None, tau=None, nodes=8):
        """Integrate a chart family of GeneralForms of degree = dim."""
        total = 0.0
        err_total = 0.0
        pspace = ParamSpace(self.dim)
        for leg in self.legs:
            form = form_by_chart[leg.chart_id]
            if form.degree != self.dim:
                raise MathError(
                    f"form degree {form.degree} != cycle dimension {self.dim}"
                )
            pulled = form.pullback(leg.mapping, pspace)
            top_legs = tuple(("x", d) for d in range(1, self.dim + 1))
            coeff = pulled.coeffs.get(top_legs, ex.ZERO)
            if coeff.is_zero():
                continue

            def f(points, coeff=coeff):
                env = {
                    param_symbol(d + 1): points[:, d] for d in range(self.dim)
                }
                return np.asarray(ex.evaluate(coeff, env), dtype=float) * np.ones(
                    points.shape[0]
                )

            kwargs = {} if tau is None else {"tau": tau}
            val, err = nquad(f, self.dim, nodes=nodes, **kwargs)
            total += leg.orientation * val
            err_total += err
        return total, err_total


def _face_point(row, face, k):
    d, side = face
    out = np.zeros(k)
    j = 0
    for idx in range(1, k + 1):
        if idx == d:
            out[idx - 1] = float(side)
        else:
            out[idx - 1] = row[j]
            j += 1
    return out


def _eval_leg(leg, params):
    env = {param_symbol(d + 1): float(params[d]) for d in range(len(params))}
    return {s: float(ex.evaluate(e, env)) for s, e in leg.mapping.items()}
