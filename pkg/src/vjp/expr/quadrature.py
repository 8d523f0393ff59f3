"""Tensor-product Gauss-Legendre quadrature on the unit cube."""

from __future__ import annotations

import numpy as np

from ..errors import QuadratureNonConvergence

TAU_QUAD = 1e-6
NODE_CAP = 256


def _grid(nodes, k):
    x, w = np.polynomial.legendre.leggauss(nodes)
    x = 0.5 * (x + 1.0)  # [0,1]
    w = 0.5 * w
    axes = np.meshgrid(*([x] * k), indexing="ij")
    pts = np.stack([a.ravel() for a in axes], axis=-1)
    wts = np.ones(pts.shape[0])
    for d in range(k):
        wts *= np.tile(
            np.repeat(w, nodes ** (k - d - 1)), nodes**d
        )
    return pts, wts


def nquad(f, k, nodes=4, tau=TAU_QUAD, node_cap=NODE_CAP):
    """Integrate f over [0,1]^k; f takes an (N, k) array and returns (N,).

    Doubles the per-axis node count until two successive estimates differ by
    less than tau (or the cap is hit). Returns (value, error_estimate).
    """
    if nodes < 2:
        nodes = 2
    prev = None
    while nodes <= node_cap:
        pts, wts = _grid(nodes, k)
        val = float(np.dot(wts, np.asarray(f(pts), dtype=float)))
        if prev is not None:
            err = abs(val - prev)
            if err < tau:
                return val, err
        prev = val
        nodes *= 2
    raise QuadratureNonConvergence(
        f"tensor Gauss-Legendre did not converge below {tau} within {node_cap} nodes per axis"
    )
