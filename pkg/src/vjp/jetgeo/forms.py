"""Form types over jet coordinates.

HorizontalForm  -- coefficients over wedge monomials of base differentials
                   dx^{i1} ^ ... ^ dx^{ip}, sorted index subsets only.
SourceForm      -- the component vector (E_1 .. E_m) paired with
                   omega^a ^ dx^1 ^ ... ^ dx^n.
GeneralForm     -- forms with both dx^i and du^a_J legs (used for closed
                   representatives of cohomology classes, partition-of-unity
                   collation, and cycle/section pullbacks).

Degrees above n are rejected for horizontal forms; the variational sequence
representation used here needs p <= n plus source forms only.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import DegreeError, MathError
from ..jetspace import SymbolKind
from .. import expr as ex


class HorizontalForm:
    """Degree-p horizontal form; coefficient map over sorted p-subsets."""

    def __init__(self, space, degree, coeffs=None):
        if not 0 <= degree <= space.n:
            raise DegreeError(
                f"horizontal degree {degree} outside 0..{space.n} (forms of degree > n unsupported)"
            )
        self.space = space
        self.degree = degree
        self.coeffs = {}
        for subset, e in (coeffs or {}).items():
            subset = tuple(subset)
            if tuple(sorted(set(subset))) != subset or len(subset) != degree:
                raise DegreeError(f"bad wedge subset {subset} for degree {degree}")
            if not e.is_zero():
                self.coeffs[subset] = e

    @classmethod
    def zero(cls, space, degree):
        return cls(space, degree)

    @classmethod
    def top(cls, space, coefficient):
        idx = tuple(range(1, space.n + 1))
        return cls(space, space.n, {idx: coefficient})

    def coefficient(self, subset):
        return self.coeffs.get(tuple(subset), ex.ZERO)

    @property
    def top_coefficient(self):
        if self.degree != self.space.n:
            raise DegreeError("top_coefficient on a non-top form")
        return self.coefficient(range(1, self.space.n + 1))

    def is_zero(self):
        return not self.coeffs

    def map_coeffs(self, fn):
        return HorizontalForm(
            self.space, self.degree, {s: fn(e) for s, e in self.coeffs.items()}
        )

    def __add__(self, other):
        self._check_peer(other)
        out = dict(self.coeffs)
        for s, e in other.coeffs.items():
            out[s] = out.get(s, ex.ZERO) + e
        return HorizontalForm(self.space, self.degree, out)

    def __sub__(self, other):
        return self + other.scale(Fraction(-1))

    def scale(self, c):
        return self.map_coeffs(lambda e: ex.scale(e, Fraction(c)))

    def mul_expr(self, e):
        return self.map_coeffs(lambda c: c * e)

    def _check_peer(self, other):
        if self.space != other.space or self.degree != other.degree:
            raise DegreeError("horizontal forms over different spaces/degrees")

    def max_jet_order(self):
        return max((e.max_jet_order() for e in self.coeffs.values()), default=0)

    def __str__(self):
        if not self.coeffs:
            return "0"
        names = self.space.base_names
        parts = []
        for subset in sorted(self.coeffs):
            wedge = "^".join(f"d{names[i - 1]}" for i in subset)
            coeff = ex.to_grammar(self.coeffs[subset])
            parts.append(f"({coeff}) {wedge}" if wedge else coeff)
        return " + ".join(parts)

    __repr__ = __str__


def current_from_components(space, components):
    """Build the (n-1)-form sum_i comp^i * (d/dx^i -| dx^1^...^dx^n)."""
    n = space.n
    full = tuple(range(1, n + 1))
    coeffs = {}
    for i, comp in zip(full, components):
        if comp.is_zero():
            continue
        subset = tuple(j for j in full if j != i)
        sign = Fraction((-1) ** (i - 1))
        coeffs[subset] = coeffs.get(subset, ex.ZERO) + ex.scale(comp, sign)
    return HorizontalForm(space, n - 1, coeffs)


def components_from_current(form):
    """Inverse of current_from_components for degree n-1 forms."""
    space = form.space
    n = space.n
    if form.degree != n - 1:
        raise DegreeError("expected a degree n-1 current")
    full = tuple(range(1, n + 1))
    comps = []
    for i in full:
        subset = tuple(j for j in full if j != i)
        comps.append(ex.scale(form.coefficient(subset), Fraction((-1) ** (i - 1))))
    return comps


class SourceForm:
    """Components E_a of a dynamical form on J_2r; one per field coordinate."""

    def __init__(self, space, components):
        components = list(components)
        if len(components) != space.m:
            raise MathError(
                f"source form needs {space.m} components, got {len(components)}"
            )
        self.space = space
        self.components = components

    def is_zero(self):
        return all(c.is_zero() for c in self.components)

    def __add__(self, other):
        return SourceForm(
            self.space, [a + b for a, b in zip(self.components, other.components)]
        )

    def __sub__(self, other):
        return SourceForm(
            self.space, [a - b for a, b in zip(self.components, other.components)]
        )

    def scale(self, c):
        return SourceForm(self.space, [ex.scale(e, Fraction(c)) for e in self.components])

    def max_jet_order(self):
        return max((e.max_jet_order() for e in self.components), default=0)

    def contract(self, vertical_components):
        """Xi_V -| eta as a top-degree horizontal form."""
        total = ex.ZERO
        for xv, comp in zip(vertical_components, self.components):
            total = total + xv * comp
        return HorizontalForm.top(self.space, total)

    def __str__(self):
        names = self.space.field_names
        return "; ".join(
            f"E[{names[a]}] = {ex.to_grammar(c)}" for a, c in enumerate(self.components)
        )

    __repr__ = __str__


# -- general forms -------------------------------------------------------------

# A coform leg is ('x', i) for dx^i or ('u', a, J) for du^a_J.


def _leg_key(leg):
    return (0, leg[1], 0, ()) if leg[0] == "x" else (1, leg[1], len(leg[2]), leg[2])


def _sort_legs(legs):
    """Sort wedge legs, tracking the permutation sign; None for repeats."""
    legs = list(legs)
    sign = 1
    for i in range(1, len(legs)):
        j = i
        while j > 0 and _leg_key(legs[j - 1]) > _leg_key(legs[j]):
            legs[j - 1], legs[j] = legs[j], legs[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(legs, legs[1:]):
        if a == b:
            return None, 0
    return tuple(legs), sign


class GeneralForm:
    """A differential form on J_rY with dx and du_J legs, exact coefficients."""

    def __init__(self, space, degree, coeffs=None):
        self.space = space
        self.degree = degree
        self.coeffs = {}
        for legs, e in (coeffs or {}).items():
            legs = tuple(legs)
            if len(legs) != degree:
                raise DegreeError("wedge arity disagrees with the declared degree")
            if not e.is_zero():
                self.coeffs[legs] = e

    @classmethod
    def zero(cls, space, degree):
        return cls(space, degree)

    def is_zero(self):
        return not self.coeffs

    def add_term(self, legs, e):
        legs, sign = _sort_legs(legs)
        if legs is None or e.is_zero():
            return
        cur = self.coeffs.get(legs, ex.ZERO) + ex.scale(e, Fraction(sign))
        if cur.is_zero():
            self.coeffs.pop(legs, None)
        else:
            self.coeffs[legs] = cur

    def __add__(self, other):
        out = GeneralForm(self.space, self.degree, dict(self.coeffs))
        for legs, e in other.coeffs.items():
            out.add_term(legs, e)
        return out

    def scale(self, c):
        return GeneralForm(
            self.space,
            self.degree,
            {legs: ex.scale(e, Fraction(c)) for legs, e in self.coeffs.items()},
        )

    def __sub__(self, other):
        return self + other.scale(Fraction(-1))

    def wedge(self, other):
        out = GeneralForm(self.space, self.degree + other.degree)
        for l1, e1 in self.coeffs.items():
            for l2, e2 in other.coeffs.items():
                out.add_term(l1 + l2, e1 * e2)
        return out

    def exterior_d(self):
        """Full exterior differential in the (x, u_J) coordinates present."""
        out = GeneralForm(self.space, self.degree + 1)
        for legs, e in self.coeffs.items():
            for sym in sorted(e.free_symbols()):
                if sym.kind == SymbolKind.BASE:
                    leg = ("x", sym.base_index)
                elif sym.kind == SymbolKind.FIELD:
                    leg = ("u", sym.field_index, sym.jet)
                else:
                    continue
                de = ex.partial(e, sym)
                out.add_term((leg,) + legs, de)
        return out

    def horizontalize(self):
        """Quotient projection: du^a_J -> u^a_{J+i} dx^i, contact parts dropped."""
        if self.degree > self.space.n:
            return HorizontalForm.zero(self.space, self.space.n)
        out = HorizontalForm.zero(self.space, self.degree)
        for legs, e in self.coeffs.items():
            # expand each leg into its horizontal contributions
            pieces = [((), e)]
            for leg in legs:
                new_pieces = []
                for acc_legs, coeff in pieces:
                    if leg[0] == "x":
                        new_pieces.append((acc_legs + (leg[1],), coeff))
                    else:
                        _, a, jet = leg
                        for i in range(1, self.space.n + 1):
                            sym = self.space.jet_symbol(a, jet + (i,))
                            new_pieces.append(
                                (acc_legs + (i,), coeff * ex.from_symbol(sym))
                            )
                pieces = new_pieces
            for idxs, coeff in pieces:
                # antisymmetrise the pure-dx wedge
                seen = set()
                dup = False
                for i in idxs:
                    if i in seen:
                        dup = True
                        break
                    seen.add(i)
                if dup:
                    continue
                order = tuple(sorted(idxs))
                sign = _perm_sign(idxs)
                cur = out.coeffs.get(order, ex.ZERO) + ex.scale(coeff, Fraction(sign))
                if cur.is_zero():
                    out.coeffs.pop(order, None)
                else:
                    out.coeffs[order] = cur
        return out

    def pullback(self, mapping, target_space, jet_substitution=None):
        """Pull back along a smooth map given by coordinate expressions.

        mapping: {coordinate Symbol of this form's space -> Expression over
        the target variables}. Any symbol of this space not in the mapping is
        an error. Differentials are replaced by the chain-rule expansion over
        the free symbols of the mapped expressions.
        """
        subs = dict(mapping)
        if jet_substitution:
            subs.update(jet_substitution)
        out = GeneralForm(target_space, self.degree)
        for legs, e in self.coeffs.items():
            coeff = ex.substitute(e, subs)
            pieces = [((), coeff)]
            for leg in legs:
                sym = _leg_symbol(self.space, leg)
                image = subs.get(sym)
                if image is None:
                    raise MathError(
                        f"pullback mapping misses coordinate {sym.display()}"
                    )
                new_pieces = []
                for acc, c in pieces:
                    for var in sorted(image.free_symbols()):
                        if var.kind == SymbolKind.CONST:
                            continue
                        d = ex.partial(image, var)
                        if d.is_zero():
                            continue
                        new_leg = _symbol_leg(var)
                        new_pieces.append((acc + (new_leg,), c * d))
                pieces = new_pieces
            for new_legs, c in pieces:
                out.add_term(new_legs, c)
        return out

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for legs in sorted(self.coeffs, key=lambda L: tuple(_leg_key(l) for l in L)):
            wedge = "^".join(_leg_str(self.space, l) for l in legs)
            parts.append(f"({ex.to_grammar(self.coeffs[legs])}) {wedge}".strip())
        return " + ".join(parts)

    __repr__ = __str__


def _perm_sign(idxs):
    sign = 1
    idxs = list(idxs)
    for i in range(len(idxs)):
        for j in range(i + 1, len(idxs)):
            if idxs[i] > idxs[j]:
                sign = -sign
    return sign


def _leg_symbol(space, leg):
    if leg[0] == "x":
        return space.base_symbol(leg[1])
    return space.jet_symbol(leg[1], leg[2])


def _leg_str(space, leg):
    return "d" + _leg_symbol(space, leg).display()


def _symbol_leg(sym):
    if sym.kind == SymbolKind.BASE:
        return ("x", sym.base_index)
    if sym.kind == SymbolKind.FIELD:
        return ("u", sym.field_index, sym.jet)
    raise MathError(f"symbol {sym.display()} cannot label a differential")


def horizontal_as_general(form):
    """Embed a HorizontalForm as a GeneralForm with pure dx legs."""
    out = GeneralForm(form.space, form.degree)
    for subset, e in form.coeffs.items():
        out.add_term(tuple(("x", i) for i in subset), e)
    return out
