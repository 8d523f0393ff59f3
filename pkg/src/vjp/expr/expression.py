"""Exact symbolic expressions over jet coordinates.

Canonical form
--------------
An Expression is a quotient  num / den  where

* ``num`` is a multivariate polynomial with Fraction coefficients whose
  variables ("atoms") are coordinate symbols and applications of the frozen
  transcendental set {sin, cos, exp};
* ``den`` is a product of positive integer powers of irreducible-looking
  bases: single atoms or primitive multi-term polynomials.

Normalisation rules keep zero unique and make the arithmetic a ring:

* positive integer powers of sums are always expanded, so ``num`` never
  contains a compound base;
* ``cos(t)^2`` is rewritten to ``1 - sin(t)^2`` inside numerator monomials
  (cos powers above 1 never survive), which makes Pythagorean combinations
  cancel canonically;
* ``exp`` factors inside a monomial are merged (``exp(a)*exp(b) = exp(a+b)``)
  and never appear in denominators (``exp(a)^-1 = exp(-a)``);
* ``sin``/``cos`` arguments are sign-normalised (``sin(-x) = -sin(x)``);
* denominator polynomial bases are content-free with positive leading
  coefficient; atoms shared by the denominator and every numerator monomial
  are cancelled.

Two mathematically equal rational expressions always subtract to the
canonical zero; equality of transcendental combinations beyond these rules
falls back to sampling (see equality.py).

Coefficients are exact rationals throughout; no floats enter an Expression.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..errors import DivisionByZeroExpression, MathError
from ..jetspace import HOMOTOPY, Symbol, SymbolKind

FUNCTIONS = ("sin", "cos", "exp")

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class App:
    """Application of one of the frozen transcendental functions."""

    fn: str
    arg: "Expression"

    def __post_init__(self):
        assert self.fn in FUNCTIONS

    def key(self):
        return (1, self.fn, self.arg.key())


class PolyBase:
    """A primitive multi-term polynomial used as a denominator base."""

    __slots__ = ("items", "_key", "_hash")

    def __init__(self, items):
        self.items = items  # tuple[(monomial, Fraction)], canonically sorted
        self._key = (2, tuple((_mono_key(m), (c.numerator, c.denominator)) for m, c in items))
        self._hash = hash(self._key)

    def key(self):
        return self._key

    def as_poly(self):
        return dict(self.items)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return isinstance(other, PolyBase) and self._key == other._key


def _atom_key(atom):
    if isinstance(atom, Symbol):
        return (0, int(atom.kind), atom.base_index, atom.field_index, atom.jet, atom.name)
    return atom.key()


def _mono_key(mono):
    return tuple((_atom_key(a), p) for a, p in mono)


def _sort_mono(pairs):
    return tuple(sorted(pairs, key=lambda ap: _atom_key(ap[0])))


class Expression:
    """Immutable canonical symbolic scalar; use the module helpers to build."""

    __slots__ = ("num", "den", "_key", "_hash")

    def __init__(self, num, den, _internal=False):
        assert _internal, "construct expressions via the factory helpers"
        self.num = num
        self.den = den
        self._key = None
        self._hash = None

    # -- identity ------------------------------------------------------------

    def key(self):
        if self._key is None:
            nk = tuple(
                sorted(
                    ((_mono_key(m), (c.numerator, c.denominator)) for m, c in self.num.items()),
                )
            )
            dk = tuple((_atom_key(b) if not isinstance(b, PolyBase) else b.key(), p) for b, p in self.den)
            self._key = (nk, dk)
        return self._key

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    def __eq__(self, other):
        return isinstance(other, Expression) and self.key() == other.key()

    # -- inspection ------------------------------------------------------------

    def is_zero(self):
        return not self.num

    def as_fraction(self):
        """The Fraction value if the expression is a rational constant, else None."""
        if self.den:
            return None
        if not self.num:
            return _ZERO
        if len(self.num) == 1 and () in self.num:
            return self.num[()]
        return None

    def is_one(self):
        return self.as_fraction() == 1

    def free_symbols(self):
        out = set()

        def walk_atom(a):
            if isinstance(a, Symbol):
                out.add(a)
            elif isinstance(a, App):
                out.update(a.arg.free_symbols())
            else:
                for m, _ in a.items:
                    for at, _p in m:
                        walk_atom(at)

        for m in self.num:
            for a, _ in m:
                walk_atom(a)
        for b, _ in self.den:
            walk_atom(b)
        return out

    def max_jet_order(self):
        orders = [s.order for s in self.free_symbols() if s.kind == SymbolKind.FIELD]
        return max(orders, default=0)

    def contains(self, sym):
        return sym in self.free_symbols()

    def leading_coefficient(self):
        if not self.num:
            return _ZERO
        m = max(self.num, key=_mono_key)
        return self.num[m]

    # -- operators -------------------------------------------------------------

    def __add__(self, other):
        return add(self, _coerce(other))

    __radd__ = __add__

    def __neg__(self):
        return scale(self, Fraction(-1))

    def __sub__(self, other):
        return add(self, scale(_coerce(other), Fraction(-1)))

    def __rsub__(self, other):
        return add(_coerce(other), scale(self, Fraction(-1)))

    def __mul__(self, other):
        return mul(self, _coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return div(self, _coerce(other))

    def __rtruediv__(self, other):
        return div(_coerce(other), self)

    def __pow__(self, k):
        return pow_int(self, k)

    def __str__(self):
        return to_grammar(self)

    def __repr__(self):
        return f"<expr {to_grammar(self)}>"


def _coerce(x):
    if isinstance(x, Expression):
        return x
    if isinstance(x, (int, Fraction)):
        return from_fraction(Fraction(x))
    raise TypeError(f"cannot coerce {type(x).__name__} into Expression")


# -- construction ----------------------------------------------------------


def _make(num, den):
    if not num:
        return Expression({}, (), _internal=True)
    return Expression(num, den, _internal=True)


ZERO = _make({}, ())
ONE = _make({(): _ONE}, ())


def from_fraction(c):
    c = Fraction(c)
    if c == 0:
        return ZERO
    return _make({(): c}, ())


def from_int(k):
    return from_fraction(Fraction(k))


def from_symbol(sym):
    return _make({((sym, 1),): _ONE}, ())


def homotopy_param():
    return from_symbol(HOMOTOPY)


# -- monomial-level normalisation -------------------------------------------


def _normalize_monomial(pairs, coeff):
    """Merge duplicate atoms, fold exp factors, reduce cos powers.

    Returns a Poly (dict monomial -> Fraction) because the cos^2 rewrite can
    split one monomial into a sum.
    """
    if coeff == 0:
        return {}
    powers = {}
    exp_arg = None
    for atom, p in pairs:
        if p == 0:
            continue
        if isinstance(atom, App) and atom.fn == "exp":
            contrib = scale(atom.arg, Fraction(p))
            exp_arg = contrib if exp_arg is None else add(exp_arg, contrib)
        else:
            powers[atom] = powers.get(atom, 0) + p
    plain = []
    cos_excess = []  # (theta, k) with k >= 2
    for atom, p in powers.items():
        if p == 0:
            continue
        if p < 0:
            raise AssertionError("negative powers may not enter a numerator monomial")
        if isinstance(atom, App) and atom.fn == "cos" and p >= 2:
            cos_excess.append((atom, p))
        else:
            plain.append((atom, p))
    if exp_arg is not None and not exp_arg.is_zero():
        plain.append((App("exp", exp_arg), 1))
    result = {_sort_mono(plain): coeff}
    for cos_atom, p in cos_excess:
        half, rem = divmod(p, 2)
        # cos^2 = 1 - sin^2 (syntactically identical argument)
        sin_atom = App("sin", cos_atom.arg)
        factor = {(): _ONE, ((sin_atom, 2),): Fraction(-1)}
        piece = _poly_pow(factor, half)
        if rem:
            piece = _poly_mul(piece, {((cos_atom, 1),): _ONE})
        result = _poly_mul(result, piece)
    return result


def _poly_add_into(target, poly, factor=_ONE):
    for m, c in poly.items():
        nc = target.get(m, _ZERO) + c * factor
        if nc:
            target[m] = nc
        else:
            target.pop(m, None)
    return target


def _poly_mul(p1, p2):
    if not p1 or not p2:
        return {}
    out = {}
    for m1, c1 in p1.items():
        for m2, c2 in p2.items():
            piece = _normalize_monomial(list(m1) + list(m2), c1 * c2)
            _poly_add_into(out, piece)
    return out


def _poly_pow(p, k):
    assert k >= 0
    result = {(): _ONE}
    base = p
    while k:
        if k & 1:
            result = _poly_mul(result, base)
        k >>= 1
        if k:
            base = _poly_mul(base, base)
    return result


def _primitive(poly):
    """Factor a poly as coeff * primitive-poly with positive leading sign."""
    assert poly
    num_gcd = 0
    den_lcm = 1
    for c in poly.values():
        num_gcd = math.gcd(num_gcd, abs(c.numerator))
        den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
    content = Fraction(num_gcd, den_lcm)
    lead = poly[max(poly, key=_mono_key)]
    if lead < 0:
        content = -content
    prim = {m: c / content for m, c in poly.items()}
    return content, prim


def _den_merge(d1, d2):
    acc = dict(d1)
    for b, p in d2:
        acc[b] = acc.get(b, 0) + p
    items = [(b, p) for b, p in acc.items() if p != 0]
    items.sort(key=lambda bp: _atom_key(bp[0]) if not isinstance(bp[0], PolyBase) else bp[0].key())
    return tuple(items)


def _den_to_poly(den):
    out = {(): _ONE}
    for b, p in den:
        if isinstance(b, PolyBase):
            out = _poly_mul(out, _poly_pow(b.as_poly(), p))
        else:
            out = _poly_mul(out, {((b, p),): _ONE})
    return out


def _exact_divide(num, base_items):
    """Exact multivariate division num / base, or None if not divisible.

    Standard lead-term reduction under a graded-lex order on the combined
    atom alphabet. This is only division testing, not factorisation: it
    cancels denominator bases that divide the numerator on the nose.
    """
    atoms = set()
    for m in num:
        for a, _ in m:
            atoms.add(a)
    for m, _ in base_items:
        for a, _ in m:
            atoms.add(a)
    atoms = sorted(atoms, key=_atom_key)
    index = {a: i for i, a in enumerate(atoms)}
    k = len(atoms)

    def vec(mono):
        v = [0] * k
        for a, p in mono:
            v[index[a]] = p
        return tuple(v)

    def order(v):
        return (sum(v), v)

    B = {vec(m): c for m, c in base_items}
    P = {vec(m): c for m, c in num.items()}
    lb = max(B, key=order)
    lbc = B[lb]
    Q = {}
    while P:
        lp = max(P, key=order)
        if any(lp[i] < lb[i] for i in range(k)):
            return None
        qv = tuple(lp[i] - lb[i] for i in range(k))
        qc = P[lp] / lbc
        Q[qv] = Q.get(qv, _ZERO) + qc
        for bv, bc in B.items():
            nv = tuple(qv[i] + bv[i] for i in range(k))
            nc = P.get(nv, _ZERO) - qc * bc
            if nc:
                P[nv] = nc
            else:
                P.pop(nv, None)
    out = {}
    for v, c in Q.items():
        if not c:
            continue
        mono = _sort_mono([(atoms[i], v[i]) for i in range(k) if v[i]])
        out[mono] = c
    return out


def _cancel(num, den):
    """Cancel denominator factors shared with the whole numerator."""
    if not num or not den:
        return num, tuple(den)
    new_den = []
    for b, p in den:
        if isinstance(b, PolyBase):
            while p > 0:
                q = _exact_divide(num, b.items)
                if q is None:
                    break
                num = q
                p -= 1
            if p:
                new_den.append((b, p))
            continue
        shared = min((dict(m).get(b, 0) for m in num), default=0)
        k = min(shared, p)
        if k > 0:
            num = {
                _sort_mono([(a, q - k) if a == b else (a, q) for a, q in m if not (a == b and q == k)]): c
                for m, c in num.items()
            }
            # rebuilt keys may collide only if normalisation was broken
            if p - k:
                new_den.append((b, p - k))
        else:
            new_den.append((b, p))
    return num, tuple(new_den)


def _normalized(num, den):
    if not num:
        return ZERO
    num, den = _cancel(num, den)
    return _make(num, den)


# -- ring operations ---------------------------------------------------------


def add(e1, e2):
    if e1.is_zero():
        return e2
    if e2.is_zero():
        return e1
    if e1.den == e2.den:
        num = dict(e1.num)
        _poly_add_into(num, e2.num)
        return _normalized(num, e1.den)
    lcm = dict(e1.den)
    for b, p in e2.den:
        lcm[b] = max(lcm.get(b, 0), p)
    lcm_t = _den_merge(tuple(lcm.items()), ())

    def complement(den):
        have = dict(den)
        rest = [(b, p - have.get(b, 0)) for b, p in lcm_t if p - have.get(b, 0) > 0]
        return _den_to_poly(tuple(rest))

    num = _poly_mul(e1.num, complement(e1.den))
    _poly_add_into(num, _poly_mul(e2.num, complement(e2.den)))
    return _normalized(num, lcm_t)


def scale(e, c):
    c = Fraction(c)
    if c == 0 or e.is_zero():
        return ZERO
    return _make({m: cc * c for m, cc in e.num.items()}, e.den)


def mul(e1, e2):
    if e1.is_zero() or e2.is_zero():
        return ZERO
    f1 = e1.as_fraction()
    if f1 is not None:
        return scale(e2, f1)
    f2 = e2.as_fraction()
    if f2 is not None:
        return scale(e1, f2)
    num = _poly_mul(e1.num, e2.num)
    den = _den_merge(e1.den, e2.den)
    return _normalized(num, den)


def invert(e):
    if e.is_zero():
        raise DivisionByZeroExpression("division by the zero expression")
    num = _den_to_poly(e.den)
    if len(e.num) == 1:
        ((mono, coeff),) = e.num.items()
        den_entries = []
        extra = _ONE / coeff
        for atom, p in mono:
            if isinstance(atom, App) and atom.fn == "exp":
                num = _poly_mul(
                    num, {((App("exp", scale(atom.arg, Fraction(-p))), 1),): _ONE}
                )
            else:
                den_entries.append((atom, p))
        num = {m: c * extra for m, c in num.items()}
        return _normalized(num, _den_merge(tuple(den_entries), ()))
    content, prim = _primitive(e.num)
    base = PolyBase(tuple(sorted(prim.items(), key=lambda mc: _mono_key(mc[0]))))
    num = {m: c / content for m, c in num.items()}
    return _normalized(num, ((base, 1),))


def div(e1, e2):
    f2 = e2.as_fraction()
    if f2 is not None:
        if f2 == 0:
            raise DivisionByZeroExpression("division by zero")
        return scale(e1, _ONE / f2)
    return mul(e1, invert(e2))


def pow_int(e, k):
    k = int(k)
    if k == 0:
        return ONE
    if k < 0:
        return pow_int(invert(e), -k)
    if e.is_zero():
        return ZERO
    result = ONE
    base = e
    while k:
        if k & 1:
            result = mul(result, base)
        k >>= 1
        if k:
            base = mul(base, base)
    return result


# -- transcendental constructors ---------------------------------------------


def app(fn, arg):
    if fn not in FUNCTIONS:
        raise MathError(f"unknown function {fn!r}; the transcendental set is frozen")
    if arg.is_zero():
        return ZERO if fn == "sin" else ONE
    if fn == "exp":
        return _make({((App("exp", arg), 1),): _ONE}, ())
    sign = _ONE
    if arg.leading_coefficient() < 0:
        arg = scale(arg, Fraction(-1))
        if fn == "sin":
            sign = -_ONE
    return _make({((App(fn, arg), 1),): sign}, ())


def sin(arg):
    return app("sin", _coerce(arg))


def cos(arg):
    return app("cos", _coerce(arg))


def exp(arg):
    return app("exp", _coerce(arg))


# -- calculus ----------------------------------------------------------------


def _atom_derivative(atom, sym):
    """d(atom)/d(sym) as an Expression."""
    if isinstance(atom, Symbol):
        return ONE if atom == sym else ZERO
    if atom.fn == "sin":
        return mul(cos(atom.arg), partial(atom.arg, sym))
    if atom.fn == "cos":
        return scale(mul(sin(atom.arg), partial(atom.arg, sym)), Fraction(-1))
    return mul(exp(atom.arg), partial(atom.arg, sym))


def partial(e, sym):
    """Formal partial derivative; every other symbol is independent."""
    total = ZERO
    for mono, coeff in e.num.items():
        for idx, (atom, p) in enumerate(mono):
            da = _atom_derivative(atom, sym)
            if da.is_zero():
                continue
            rest = list(mono[:idx]) + list(mono[idx + 1 :])
            if p > 1:
                rest.append((atom, p - 1))
            piece = _make(_normalize_monomial(rest, coeff * p), e.den)
            total = add(total, mul(piece, da))
    for b, p in e.den:
        base_expr = (
            _make(dict(b.items), ()) if isinstance(b, PolyBase) else _make({((b, 1),): _ONE}, ())
        )
        db = partial(base_expr, sym)
        if db.is_zero():
            continue
        bumped = _den_merge(e.den, ((b, 1),))
        piece = _make({m: c * Fraction(-p) for m, c in e.num.items()}, bumped)
        total = add(total, mul(piece, db))
    return total


def substitute(e, bindings):
    """Simultaneous substitution Symbol -> Expression, then canonicalise."""
    if not bindings:
        return e
    relevant = set(bindings) & e.free_symbols()
    if not relevant:
        return e

    def sub_atom(atom):
        if isinstance(atom, Symbol):
            return bindings.get(atom, from_symbol(atom))
        return app(atom.fn, substitute(atom.arg, bindings))

    total = ZERO
    for mono, coeff in e.num.items():
        piece = from_fraction(coeff)
        for atom, p in mono:
            piece = mul(piece, pow_int(sub_atom(atom), p))
            if piece.is_zero():
                break
        total = add(total, piece)
    for b, p in e.den:
        if isinstance(b, PolyBase):
            base_expr = substitute(_make(dict(b.items), ()), bindings)
        else:
            base_expr = sub_atom(b)
        total = mul(total, pow_int(base_expr, -p))
    return total


# -- numeric evaluation --------------------------------------------------------


def evaluate(e, env):
    """Evaluate at a point; env maps Symbol -> float. numpy arrays work too."""

    def atom_val(atom):
        if isinstance(atom, Symbol):
            if atom in env:
                return env[atom]
            if atom.kind == SymbolKind.CONST and atom.value is not None:
                return atom.value
            raise MathError(f"no binding for symbol {atom.display()} during evaluation")
        x = evaluate(atom.arg, env)
        import numpy as np

        return {"sin": np.sin, "cos": np.cos, "exp": np.exp}[atom.fn](x)

    total = 0.0
    for mono, coeff in e.num.items():
        term = float(coeff)
        for atom, p in mono:
            term = term * atom_val(atom) ** p
        total = total + term
    for b, p in e.den:
        if isinstance(b, PolyBase):
            bv = evaluate(_make(dict(b.items), ()), env)
        else:
            bv = atom_val(b)
        total = total / bv**p
    return total


# -- rendering ----------------------------------------------------------------


def _frac_str(c):
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _atom_str(atom):
    if isinstance(atom, Symbol):
        return atom.display()
    if isinstance(atom, App):
        return f"{atom.fn}({to_grammar(atom.arg)})"
    return f"({_poly_str(dict(atom.items))})"


def _mono_str(mono, coeff):
    parts = []
    c = abs(coeff)
    if c != 1 or not mono:
        parts.append(_frac_str(c))
    for atom, p in mono:
        s = _atom_str(atom)
        parts.append(s if p == 1 else f"{s}^{p}")
    return "*".join(parts)


def _poly_str(poly):
    items = sorted(poly.items(), key=lambda mc: _mono_key(mc[0]), reverse=True)
    out = ""
    for mono, coeff in items:
        piece = _mono_str(mono, coeff)
        if not out:
            out = piece if coeff > 0 else f"-{piece}"
        else:
            out += f" + {piece}" if coeff > 0 else f" - {piece}"
    return out or "0"


def to_grammar(e):
    """Render in the input grammar; reports stay re-parseable."""
    if e.is_zero():
        return "0"
    num = _poly_str(e.num)
    if not e.den:
        return num
    if len(e.num) > 1:
        num = f"({num})"
    pieces = [num]
    for b, p in e.den:
        s = _atom_str(b)
        if isinstance(b, PolyBase):
            pieces.append(f"{s}^{p}" if p > 1 else s)
        else:
            pieces.append(f"{s}^{p}" if p > 1 else s)
    return pieces[0] + "/" + "/".join(pieces[1:])
