"""Exact definite integration over the homotopy parameter, t in [0,1].

The integrable class is what the fiber-scaling homotopies actually produce:

* polynomials in t (power rule), and
* terms  t^p * R / (C0 + C2*t^2)^k  with t-free R, C0, C2 and odd p, which
  close rationally under the substitution w = t^2 (this is the class the
  scaling u -> t*u generates from rational source forms).

Anything else -- even t powers against a quadratic base, several distinct
t-dependent bases, t inside a transcendental argument, or a surviving log
term -- raises NonPolynomialInT: the construction that produced the
integrand is outside the supported class.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from ..errors import NonPolynomialInT
from ..jetspace import HOMOTOPY
from . import expression as ex


def _atom_has_t(atom):
    if isinstance(atom, ex.App):
        return HOMOTOPY in atom.arg.free_symbols()
    if isinstance(atom, ex.PolyBase):
        return HOMOTOPY in ex._make(dict(atom.items), ()).free_symbols()
    return atom == HOMOTOPY


def _split_quadratic(base):
    """PolyBase -> (C0, C2) with base == C0 + C2*t^2, both t-free."""
    c0 = {}
    c2 = {}
    for mono, coeff in base.items:
        tpow = 0
        rest = []
        for atom, p in mono:
            if atom == HOMOTOPY:
                tpow = p
            elif _atom_has_t(atom):
                raise NonPolynomialInT(
                    "homotopy parameter inside a transcendental or nested base"
                )
            else:
                rest.append((atom, p))
        target = {0: c0, 2: c2}.get(tpow)
        if target is None:
            raise NonPolynomialInT(
                f"denominator base carries t^{tpow}; only quadratic bases integrate exactly"
            )
        target[tuple(rest)] = coeff
    return ex._make(c0, ()) if c0 else ex.ZERO, ex._make(c2, ()) if c2 else ex.ZERO


def _integral_power_of_base(c0, c2, m):
    """integral over [0,1] of (C0 + C2*w)^m dw, m != -1.

    Uses the telescoping quotient ((C0+C2)^s - C0^s)/C2 = sum_i (C0+C2)^i *
    C0^(s-1-i), so no spurious C2 denominators enter the result.
    """
    if m == -1:
        raise NonPolynomialInT("log term survives; integrand outside the rational class")
    s = abs(m + 1)
    b1 = c0 + c2
    quotient = ex.ZERO
    for i in range(s):
        quotient = quotient + ex.pow_int(b1, i) * ex.pow_int(c0, s - 1 - i)
    if m + 1 > 0:
        return ex.scale(quotient, Fraction(1, m + 1))
    return ex.scale(quotient * ex.pow_int(b1, -s) * ex.pow_int(c0, -s), Fraction(1, s))


def integrate_t(e):
    """Exact integral over t in [0,1]; the result contains no t."""
    total = ex.ZERO
    den_tfree = []
    quad_bases = []
    t_atom_power = 0
    for b, p in e.den:
        if not _atom_has_t(b):
            den_tfree.append((b, p))
        elif b == HOMOTOPY:
            t_atom_power += p
        elif isinstance(b, ex.PolyBase):
            quad_bases.append((b, p))
        else:
            raise NonPolynomialInT("homotopy parameter inside a transcendental argument")
    if len(quad_bases) > 1:
        raise NonPolynomialInT(
            "several distinct t-dependent denominator bases; partial fractions unsupported"
        )
    for mono, coeff in e.num.items():
        p = -t_atom_power
        rest = []
        for atom, q in mono:
            if atom == HOMOTOPY:
                p += q
            elif _atom_has_t(atom):
                raise NonPolynomialInT(
                    "homotopy parameter inside a transcendental argument"
                )
            else:
                rest.append((atom, q))
        rest_expr = ex._normalized({tuple(rest): coeff}, tuple(den_tfree))
        if not quad_bases:
            if p < 0:
                raise NonPolynomialInT("negative t power; integral diverges at 0")
            total = total + ex.scale(rest_expr, Fraction(1, p + 1))
            continue
        (base, k) = quad_bases[0]
        if p < 0:
            raise NonPolynomialInT("negative t power; integral diverges at 0")
        if p % 2 == 0:
            raise NonPolynomialInT(
                f"even t power t^{p} against a quadratic base integrates to arctan"
            )
        c0, c2 = _split_quadratic(base)
        if c2.is_zero():
            raise NonPolynomialInT("degenerate t-dependent base")
        if c0.is_zero():
            raise NonPolynomialInT("base vanishes at t=0; integral diverges")
        q = (p - 1) // 2
        acc = ex.ZERO
        c2_inv_q = ex.pow_int(c2, -q) if q else ex.ONE
        for j in range(q + 1):
            sign = Fraction((-1) ** (q - j))
            piece = ex.scale(ex.pow_int(c0, q - j), sign * comb(q, j))
            piece = piece * _integral_power_of_base(c0, c2, j - k)
            acc = acc + piece
        term = ex.scale(rest_expr * c2_inv_q * acc, Fraction(1, 2))
        total = total + term
    assert HOMOTOPY not in total.free_symbols(), "t survived exact integration"
    return total
