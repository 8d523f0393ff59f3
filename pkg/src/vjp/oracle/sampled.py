"""Sampled sections with finite-difference jets.

The oracle deliberately shares no differentiation code with the symbolic
operators: jets come from centered finite-difference stencils (weights
solved from the Vandermonde moment system, fourth-order accurate), so a
symbolic-pass / numeric-fail is meaningful evidence of a canonicalizer bug.
"""

from __future__ import annotations

import numpy as np

from ..errors import MathError, SchemaError
from ..jetspace import SymbolKind
from .. import expr as ex

DEFAULT_POINTS_1D = 2048
DEFAULT_POINTS_2D = 128


def fd_weights(deriv, offsets):
    """Stencil weights for one derivative from the moment conditions."""
    import math

    offsets = np.asarray(offsets, dtype=float)
    k = len(offsets)
    A = np.vander(offsets, k, increasing=True).T  # A[m, j] = offsets[j]^m
    b = np.zeros(k)
    b[deriv] = math.factorial(deriv)
    return np.linalg.solve(A, b)


_STENCILS = {}

# smallest symmetric stencil radius with fourth-order accuracy
_RADIUS = {1: 2, 2: 2, 3: 3, 4: 3}


def stencil(deriv):
    """Centered, fourth-order accurate weights for derivative order 1..4."""
    if deriv == 0:
        return np.array([1.0]), 0
    if deriv not in _STENCILS:
        radius = _RADIUS[deriv]
        offsets = np.arange(-radius, radius + 1)
        _STENCILS[deriv] = (fd_weights(deriv, offsets), radius)
    return _STENCILS[deriv]


def _apply_axis(values, deriv, h, axis, stride=1):
    if deriv == 0:
        return values
    w, radius = stencil(deriv)
    # the weights sum to zero, so working with centered differences
    # (f_{i+off} - f_i) costs nothing and buys one power of h in roundoff
    out = np.zeros_like(values)
    for off, weight in zip(range(-radius, radius + 1), w):
        if off == 0:
            continue
        out += weight * (np.roll(values, -off * stride, axis=axis) - values)
    return out / (h * stride) ** deriv


class SampledSection:
    """Grid samples of a section with finite-difference jet values.

    box: [(a_i, b_i)] per base axis; shape: points per axis. Values either
    evaluated from section expressions or supplied as arrays. Jets carry a
    boundary margin of invalid points equal to the stencil radius times the
    derivative order; consumers must stay inside interior_slices().
    """

    def __init__(
        self, space, box, shape=None, section=None, values=None, axes=None, jet_stride=None
    ):
        n = space.n
        if len(box) != n:
            raise SchemaError("box dimension disagrees with the base dimension")
        if shape is None:
            shape = (DEFAULT_POINTS_1D,) if n == 1 else (DEFAULT_POINTS_2D,) * n
        self.space = space
        self.box = [tuple(map(float, b)) for b in box]
        if axes is not None:
            self.axes = [np.asarray(ax, dtype=float) for ax in axes]
            shape = tuple(len(ax) for ax in self.axes)
        else:
            self.axes = [
                np.linspace(a, b, num) for (a, b), num in zip(self.box, shape)
            ]
        self.shape = tuple(shape)
        self.h = [ax[1] - ax[0] for ax in self.axes]
        grids = np.meshgrid(*self.axes, indexing="ij")
        self.grid = {space.base_symbol(i + 1): grids[i] for i in range(n)}
        if values is not None:
            self.values = [np.asarray(v, dtype=float) for v in values]
        elif section is not None:
            self.values = [
                np.asarray(ex.evaluate(section.components[a], self.grid), dtype=float)
                * np.ones(self.shape)
                for a in range(space.m)
            ]
        else:
            raise SchemaError("need either section expressions or value arrays")
        # differentiate on a coarser effective spacing than the quadrature
        # grid: data rounding blows up like (h*stride)^-4 while polynomial
        # truncation stays controlled, so wide stencils keep high-order jets
        # clean on fine grids
        if jet_stride is None:
            jet_stride = max(1, min(self.shape) // 64)
        self.jet_stride = int(jet_stride)
        self._jets = {}

    def jet(self, a, jet):
        """Finite-difference D_J sigma^a over the full grid."""
        key = (a, tuple(sorted(jet)))
        if key in self._jets:
            return self._jets[key]
        values = self.values[a - 1]
        counts = {}
        for i in key[1]:
            counts[i] = counts.get(i, 0) + 1
        for axis_index, deriv in counts.items():
            if deriv > 4:
                raise MathError("finite-difference jets implemented through order 4")
            values = _apply_axis(
                values, deriv, self.h[axis_index - 1], axis_index - 1, self.jet_stride
            )
        self._jets[key] = values
        return values

    def margin(self, max_order):
        base = {0: 0, 1: 2, 2: 2, 3: 3, 4: 3}
        return base.get(min(max_order, 4), 3) * self.jet_stride + 1

    def interior_slices(self, max_order):
        m = self.margin(max_order)
        return tuple(slice(m, s - m) for s in self.shape)

    def environment(self, max_order):
        """Symbol -> array bindings for expressions of jet order <= max_order."""
        env = dict(self.grid)
        for a in range(1, self.space.m + 1):
            for jet in self.space.multi_indices(max_order):
                env[self.space.jet_symbol(a, jet)] = self.jet(a, jet)
        return env

    def integrate(self, integrand, max_order):
        """Trapezoid integral of an array over the interior window."""
        sl = self.interior_slices(max_order)
        window = integrand[sl]
        axes = [ax[s] for ax, s in zip(self.axes, sl)]
        for axis in reversed(range(len(axes))):
            window = np.trapezoid(window, x=axes[axis], axis=axis)
        return float(window)
