"""Atlas model: charts, fibered transition maps, and pullbacks.

All charts of an atlas share one JetSpaceDescriptor (same coordinate names);
an overlap (i, j) stores chart j's coordinates as expressions over chart i,
so pulling a chart-j object back to chart i is a substitution. Base
components of transitions are u-independent (fibered maps); jet coordinates
transform through the prolongation recursion with the inverse base Jacobian.

Transition sanity (inverses on pairs, cocycle identity on declared triples)
is verified symbolically with equals() at build time.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import (
    ChartMismatchError,
    CocycleError,
    MissingOverlapError,
    SchemaError,
)
from ..jetspace import SymbolKind
from .. import expr as ex
from ..expr.equality import equals
from ..jetgeo import GeneralForm, HorizontalForm, SourceForm


@dataclass
class Chart:
    id: str
    space: object
    fiber_center: dict = field(default_factory=dict)  # field index -> Fraction
    base_center: dict = field(default_factory=dict)  # base index -> Fraction
    domain: dict = field(default_factory=dict)  # free-form description


class Overlap:
    """Ordered overlap (i, j): chart-j coordinates over chart i."""

    def __init__(self, space, i, j, mapping):
        self.space = space
        self.i = i
        self.j = j
        self.mapping = dict(mapping)  # {Symbol of j -> Expression over i}
        for k in range(1, space.n + 1):
            xk = space.base_symbol(k)
            if xk not in self.mapping:
                raise SchemaError(f"overlap ({i},{j}) misses base coordinate {xk.name}")
            bad = [
                s
                for s in self.mapping[xk].free_symbols()
                if s.kind == SymbolKind.FIELD
            ]
            if bad:
                raise SchemaError(
                    f"overlap ({i},{j}): base transition depends on fiber coordinates"
                )
        for a in range(1, space.m + 1):
            ua = space.field_symbol(a)
            if ua not in self.mapping:
                raise SchemaError(f"overlap ({i},{j}) misses field coordinate {ua.name}")
        self._jet_subs_cache = {}
        self._jacobian = None
        self._inverse_jacobian = None
        self._det = None

    # -- base Jacobian -------------------------------------------------------

    def jacobian(self):
        """d(x'_k)/d(x_l) as a nested list of expressions over chart i."""
        if self._jacobian is None:
            n = self.space.n
            self._jacobian = [
                [
                    ex.partial(
                        self.mapping[self.space.base_symbol(k)],
                        self.space.base_symbol(l),
                    )
                    for l in range(1, n + 1)
                ]
                for k in range(1, n + 1)
            ]
        return self._jacobian

    def jacobian_det(self):
        if self._det is None:
            self._det = _det(self.jacobian())
        return self._det

    def inverse_jacobian(self):
        """W with W[l][k] = dx_l/dx'_k, as expressions over chart i."""
        if self._inverse_jacobian is None:
            J = self.jacobian()
            n = len(J)
            det = self.jacobian_det()
            if det.is_zero():
                raise SchemaError(
                    f"overlap ({self.i},{self.j}): singular base transition"
                )
            adj = _adjugate(J)
            self._inverse_jacobian = [
                [adj[l][k] / det for k in range(n)] for l in range(n)
            ]
        return self._inverse_jacobian

    # -- jet prolongation -----------------------------------------------------

    def jet_substitution(self, max_order):
        """{Symbol of chart j (incl. jets to max_order) -> Expression over i}."""
        if max_order in self._jet_subs_cache:
            return self._jet_subs_cache[max_order]
        from ..jetgeo import total_derivative

        space = self.space
        subs = dict(self.mapping)
        W = self.inverse_jacobian() if space.n > 1 else None
        exprs = {}
        for a in range(1, space.m + 1):
            exprs[(a, ())] = self.mapping[space.field_symbol(a)]
        for order in range(1, max_order + 1):
            for jet in space.multi_indices(order, min_order=order):
                for a in range(1, space.m + 1):
                    prev = exprs[(a, jet[:-1])]
                    kprime = jet[-1]
                    if space.n == 1:
                        d = total_derivative(prev, 1, space)
                        dxdxp = ex.invert(
                            ex.partial(
                                self.mapping[space.base_symbol(1)],
                                space.base_symbol(1),
                            )
                        )
                        val = dxdxp * d
                    else:
                        val = ex.ZERO
                        for l in range(1, space.n + 1):
                            val = val + W[l - 1][kprime - 1] * total_derivative(
                                prev, l, space
                            )
                    exprs[(a, jet)] = val
                    subs[space.jet_symbol(a, jet)] = val
        self._jet_subs_cache[max_order] = subs
        return subs

    # -- pullbacks -------------------------------------------------------------

    def pull_expression(self, e, max_order=None):
        if max_order is None:
            max_order = e.max_jet_order()
        return ex.substitute(e, self.jet_substitution(max_order))

    def pull_horizontal(self, form):
        """Pull a chart-j horizontal form back to chart i (wedge minors)."""
        space = self.space
        p = form.degree
        subs = self.jet_substitution(form.max_jet_order())
        J = self.jacobian()
        out = HorizontalForm.zero(space, p)
        for Kp, coeff in form.coeffs.items():
            c = ex.substitute(coeff, subs)
            for S in itertools.combinations(range(1, space.n + 1), p):
                minor = _minor_det(J, Kp, S)
                if minor.is_zero():
                    continue
                cur = out.coeffs.get(S, ex.ZERO) + c * minor
                if cur.is_zero():
                    out.coeffs.pop(S, None)
                else:
                    out.coeffs[S] = cur
        return out

    def pull_source(self, eta):
        """Source-form components transform with dpsi/du and the Jacobian det."""
        space = self.space
        subs = self.jet_substitution(eta.max_jet_order())
        det = self.jacobian_det()
        comps = [ex.ZERO] * space.m
        for b in range(1, space.m + 1):
            ub = space.field_symbol(b)
            total = ex.ZERO
            for a in range(1, space.m + 1):
                psi_a = self.mapping[space.field_symbol(a)]
                dpsi = ex.partial(psi_a, ub)
                if dpsi.is_zero():
                    continue
                total = total + ex.substitute(eta.components[a - 1], subs) * dpsi
            comps[b - 1] = total * det
        return SourceForm(space, comps)

    def pull_general(self, form):
        """Pull a chart-j general form back to chart i (chain rule on legs)."""
        max_order = 0
        for legs, e in form.coeffs.items():
            max_order = max(max_order, e.max_jet_order())
            for leg in legs:
                if leg[0] == "u":
                    max_order = max(max_order, len(leg[2]) + 1)
        subs = self.jet_substitution(max_order)
        return form.pullback(subs, self.space)

    def check_field_compatibility(self, xi_i, xi_j, rng=None):
        """Pushforward consistency of per-chart symmetry components."""
        space = self.space
        for k in range(1, space.n + 1):
            lhs = xi_i.apply(self.mapping[space.base_symbol(k)])
            rhs = self.pull_expression(xi_j.base_components[k - 1])
            if not equals(lhs, rhs, rng=rng):
                return False
        for a in range(1, space.m + 1):
            lhs = xi_i.apply(self.mapping[space.field_symbol(a)])
            rhs = self.pull_expression(xi_j.fiber_components[a - 1])
            if not equals(lhs, rhs, rng=rng):
                return False
        return True


class Atlas:
    def __init__(self, space, charts, overlaps, triples=(), verify=True, rng=None):
        self.space = space
        self.charts = {}
        for ch in charts:
            if ch.id in self.charts:
                raise SchemaError(f"duplicate chart id {ch.id!r}")
            self.charts[ch.id] = ch
        self.overlaps = {}
        for ov in overlaps:
            if ov.i not in self.charts or ov.j not in self.charts:
                raise SchemaError(f"overlap ({ov.i},{ov.j}) references unknown charts")
            self.overlaps[(ov.i, ov.j)] = ov
        self.triples = [tuple(t) for t in triples]
        if verify:
            self.verify(rng=rng)

    def chart_ids(self):
        return list(self.charts)

    def overlap(self, i, j):
        try:
            return self.overlaps[(i, j)]
        except KeyError:
            raise MissingOverlapError(f"no overlap data for chart pair ({i},{j})") from None

    def has_overlap(self, i, j):
        return (i, j) in self.overlaps

    def pull_to(self, i, j, obj):
        """Express a chart-j object on chart i."""
        if i == j:
            return obj
        ov = self.overlap(i, j)
        if isinstance(obj, HorizontalForm):
            return ov.pull_horizontal(obj)
        if isinstance(obj, SourceForm):
            return ov.pull_source(obj)
        if isinstance(obj, GeneralForm):
            return ov.pull_general(obj)
        if isinstance(obj, ex.Expression):
            return ov.pull_expression(obj)
        raise ChartMismatchError(f"cannot pull {type(obj).__name__} across charts")

    def verify(self, rng=None):
        """Pairwise inverse identities and the cocycle condition on triples."""
        space = self.space
        coords = [space.base_symbol(i) for i in range(1, space.n + 1)]
        coords += [space.field_symbol(a) for a in range(1, space.m + 1)]
        for (i, j), ov in self.overlaps.items():
            if (j, i) not in self.overlaps:
                raise SchemaError(f"overlap ({i},{j}) lacks its reverse ({j},{i})")
            back = self.overlaps[(j, i)]
            for s in coords:
                comp = ex.substitute(ov.mapping[s], back.mapping)
                if not equals(comp, ex.from_symbol(s), rng=rng):
                    raise CocycleError(
                        f"transitions ({i},{j}) and ({j},{i}) are not mutually inverse"
                        f" on {s.name}"
                    )
        for (i, j, k) in self.triples:
            m_ij = self.overlap(i, j).mapping
            m_jk = self.overlap(j, k).mapping
            m_ik = self.overlap(i, k).mapping
            for s in coords:
                comp = ex.substitute(m_jk[s], m_ij)
                if not equals(comp, m_ik[s], rng=rng):
                    raise CocycleError(
                        f"cocycle condition fails on triple ({i},{j},{k}) at {s.name}"
                    )


def _det(M):
    n = len(M)
    if n == 1:
        return M[0][0]
    total = ex.ZERO
    for col in range(n):
        sub = [row[:col] + row[col + 1 :] for row in M[1:]]
        term = M[0][col] * _det(sub)
        total = total + ex.scale(term, Fraction((-1) ** col))
    return total


def _adjugate(M):
    n = len(M)
    if n == 1:
        return [[ex.ONE]]
    adj = [[ex.ZERO] * n for _ in range(n)]
    for r in range(n):
        for c in range(n):
            sub = [
                [M[rr][cc] for cc in range(n) if cc != c]
                for rr in range(n)
                if rr != r
            ]
            adj[c][r] = ex.scale(_det(sub), Fraction((-1) ** (r + c)))
    return adj


def _minor_det(J, rows, cols):
    """det of the submatrix J[rows][cols] (1-based index tuples)."""
    if not rows:
        return ex.ONE
    sub = [[J[r - 1][c - 1] for c in cols] for r in rows]
    return _det(sub)
