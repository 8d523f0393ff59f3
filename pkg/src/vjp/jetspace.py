"""Jet-space bookkeeping: coordinate symbols and the space descriptor.

Symbols are self-contained frozen values. A jet symbol u^a_J stores its
multi-index J as a nondecreasing tuple of base indices, so symbols that
differ only by a permutation of J are literally the same object value
(symmetry of mixed partials is structural, not a rewrite rule).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction

from .errors import JetOrderExceededError, SchemaError, UnknownCoordinateError

# Caps configured by the artifact: declared jet order and the combined order
# reachable through operators (total derivatives, Euler-Lagrange, Helmholtz).
MAX_BASE_DIM = 4
MAX_FIBER_DIM = 6
MAX_DECLARED_ORDER = 4
MAX_TOTAL_ORDER = 8

HOMOTOPY_NAME = "@t"


class SymbolKind(IntEnum):
    BASE = 0
    FIELD = 1
    PARAM = 2
    CONST = 3


@dataclass(frozen=True, order=True)
class Symbol:
    kind: SymbolKind
    base_index: int = 0
    field_index: int = 0
    jet: tuple = ()
    name: str = ""
    jet_names: tuple = ()
    # numeric binding for opaque named constants (e.g. pi); not part of the
    # grammar, only used when expressions are evaluated numerically
    value: float | None = field(default=None, compare=False)

    @property
    def order(self):
        return len(self.jet)

    def display(self):
        if self.kind == SymbolKind.PARAM:
            return HOMOTOPY_NAME
        if self.kind == SymbolKind.FIELD and self.jet:
            return f"{self.name}_{{{' '.join(self.jet_names)}}}"
        return self.name


def homotopy_symbol():
    return Symbol(SymbolKind.PARAM, name=HOMOTOPY_NAME)


def const_symbol(name, value=None):
    return Symbol(SymbolKind.CONST, name=name, value=value)


HOMOTOPY = homotopy_symbol()


class JetSpaceDescriptor:
    """Base/fiber dimensions, declared jet order, and coordinate names."""

    def __init__(self, base_names, field_names, order):
        base_names = list(base_names)
        field_names = list(field_names)
        n, m, r = len(base_names), len(field_names), int(order)
        if not (1 <= n <= MAX_BASE_DIM):
            raise SchemaError(f"base dimension {n} outside 1..{MAX_BASE_DIM}")
        if not (1 <= m <= MAX_FIBER_DIM):
            raise SchemaError(f"fiber dimension {m} outside 1..{MAX_FIBER_DIM}")
        if not (0 <= r <= MAX_DECLARED_ORDER):
            raise SchemaError(f"jet order {r} outside 0..{MAX_DECLARED_ORDER}")
        names = base_names + field_names
        if len(set(names)) != len(names):
            raise SchemaError("coordinate names must be pairwise distinct")
        for nm in names:
            if not nm.isidentifier():
                raise SchemaError(f"bad coordinate name {nm!r}")
        self.n = n
        self.m = m
        self.order = r
        self.base_names = base_names
        self.field_names = field_names
        self._base_by_name = {nm: i + 1 for i, nm in enumerate(base_names)}
        self._field_by_name = {nm: a + 1 for a, nm in enumerate(field_names)}

    # -- symbol constructors -------------------------------------------------

    def base_symbol(self, i):
        if not 1 <= i <= self.n:
            raise UnknownCoordinateError(f"base index {i} outside 1..{self.n}")
        return Symbol(SymbolKind.BASE, base_index=i, name=self.base_names[i - 1])

    def field_symbol(self, a):
        return self.jet_symbol(a, ())

    def jet_symbol(self, a, jet):
        if not 1 <= a <= self.m:
            raise UnknownCoordinateError(f"field index {a} outside 1..{self.m}")
        jet = tuple(sorted(jet))
        for i in jet:
            if not 1 <= i <= self.n:
                raise UnknownCoordinateError(f"base index {i} in multi-index")
        if len(jet) > MAX_TOTAL_ORDER:
            raise JetOrderExceededError(
                f"jet order {len(jet)} exceeds the hard cap {MAX_TOTAL_ORDER}"
            )
        return Symbol(
            SymbolKind.FIELD,
            field_index=a,
            jet=jet,
            name=self.field_names[a - 1],
            jet_names=tuple(self.base_names[i - 1] for i in jet),
        )

    def raise_jet(self, sym, i):
        """u^a_J -> u^a_{J+i}; errors past the hard order cap."""
        assert sym.kind == SymbolKind.FIELD
        return self.jet_symbol(sym.field_index, sym.jet + (i,))

    # -- lookups -------------------------------------------------------------

    def base_index(self, name):
        try:
            return self._base_by_name[name]
        except KeyError:
            raise UnknownCoordinateError(f"unknown base coordinate {name!r}") from None

    def field_index(self, name):
        try:
            return self._field_by_name[name]
        except KeyError:
            raise UnknownCoordinateError(f"unknown field coordinate {name!r}") from None

    def is_base(self, name):
        return name in self._base_by_name

    def is_field(self, name):
        return name in self._field_by_name

    def base_symbols(self):
        return [self.base_symbol(i) for i in range(1, self.n + 1)]

    def field_symbols(self):
        return [self.field_symbol(a) for a in range(1, self.m + 1)]

    def display(self, sym):
        return sym.display()

    def multi_indices(self, max_order, min_order=0):
        """All nondecreasing multi-indices with min_order <= |J| <= max_order."""
        out = []
        for k in range(min_order, max_order + 1):
            out.extend(
                itertools.combinations_with_replacement(range(1, self.n + 1), k)
            )
        return out

    def __eq__(self, other):
        return (
            isinstance(other, JetSpaceDescriptor)
            and self.base_names == other.base_names
            and self.field_names == other.field_names
            and self.order == other.order
        )

    def __hash__(self):
        return hash((tuple(self.base_names), tuple(self.field_names), self.order))

    def __repr__(self):
        return (
            f"JetSpaceDescriptor(base={self.base_names}, fields={self.field_names},"
            f" order={self.order})"
        )


def multi_factorial(jet):
    """prod_i (multiplicity of i in jet)! -- the multinomial symmetry factor."""
    out = 1
    for i in set(jet):
        c = jet.count(i)
        for k in range(2, c + 1):
            out *= k
    return out


def multi_contains(big, small):
    """Multiset containment for sorted multi-indices."""
    rem = list(big)
    for i in small:
        if i in rem:
            rem.remove(i)
        else:
            return False
    return True


def multi_subtract(big, small):
    rem = list(big)
    for i in small:
        rem.remove(i)
    return tuple(sorted(rem))


def multi_binomial(big, small):
    """prod_i C(mult_i(big), mult_i(small)) for sorted multisets small <= big."""
    from math import comb

    out = 1
    for i in set(big):
        out *= comb(big.count(i), small.count(i))
    return out


def as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise SchemaError(f"expected an exact rational, got {x!r}")
