"""Parser for the expression grammar.

Grammar (version vjp-grammar-1):

    expr     := term (('+'|'-') term)*
    term     := factor (('*'|'/') factor)*
    factor   := '-' factor | power
    power    := primary ('^' exponent)?
    exponent := INT | '-' INT | '(' '-'? INT ')'
    primary  := INT | '@t' | NAME jet? | FUNC '(' expr ')' | '(' expr ')'
    jet      := '_' (NAME | '{' jet-names '}')

Numbers are integer literals; rationals are formed with '/'. A jet suffix
names base coordinates: inside braces, whitespace-separated groups, each
group greedily split into known base-coordinate names (so ``u_{tt}`` and
``u_{t t}`` both mean the second t-derivative). A bare suffix like ``u_t``
is a single group. ``@t`` is the reserved homotopy parameter. Any other
NAME must be a declared coordinate or named constant.
"""

from __future__ import annotations

import re

from ..errors import ExprSyntaxError, JetOrderExceededError, UnknownCoordinateError
from ..jetspace import HOMOTOPY
from . import expression as ex

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<param>@t)|(?P<name>[A-Za-z][A-Za-z0-9]*)"
    r"|(?P<op>[_{}()+\-*/^]))"
)

_FUNCS = set(ex.FUNCTIONS)


class _Tokens:
    def __init__(self, text):
        self.text = text
        self.toks = []
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if m is None or m.end() == pos:
                stripped = text[pos:].lstrip()
                if not stripped:
                    break
                at = len(text) - len(stripped)
                raise ExprSyntaxError(f"unexpected character {stripped[0]!r}", at, text)
            kind = m.lastgroup
            self.toks.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, len(self.text))

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.next()
        if val != value:
            raise ExprSyntaxError(f"expected {value!r}, found {val!r}", pos, self.text)


def _split_jet_group(group, space, pos, text):
    """Greedily split a run of letters into base-coordinate names."""
    names = sorted(space.base_names, key=len, reverse=True)
    out = []
    rest = group
    while rest:
        for nm in names:
            if rest.startswith(nm):
                out.append(nm)
                rest = rest[len(nm) :]
                break
        else:
            raise UnknownCoordinateError(
                f"cannot read {group!r} as base coordinates (at position {pos})"
            )
    return out


class Parser:
    def __init__(self, text, space, constants=None, max_order=None):
        self.text = text
        self.space = space
        self.constants = constants or {}
        self.max_order = space.order if max_order is None else max_order
        self.toks = _Tokens(text)

    def parse(self):
        e = self._expr()
        kind, val, pos = self.toks.peek()
        if kind is not None:
            raise ExprSyntaxError(f"trailing input {val!r}", pos, self.text)
        return e

    def _expr(self):
        e = self._term()
        while True:
            kind, val, _ = self.toks.peek()
            if val == "+":
                self.toks.next()
                e = e + self._term()
            elif val == "-":
                self.toks.next()
                e = e - self._term()
            else:
                return e

    def _term(self):
        e = self._factor()
        while True:
            kind, val, _ = self.toks.peek()
            if val == "*":
                self.toks.next()
                e = e * self._factor()
            elif val == "/":
                self.toks.next()
                e = e * self._factor(invert=True)
            else:
                return e

    def _factor(self, invert=False):
        kind, val, _ = self.toks.peek()
        if val == "-":
            self.toks.next()
            return -self._factor(invert=invert)
        return self._power(invert=invert)

    def _power(self, invert=False):
        # a divisor applies its (negated) exponent directly to the primary, so
        # denominators keep their factored bases instead of expanding first
        e = self._primary()
        k = 1
        kind, val, _ = self.toks.peek()
        if val == "^":
            self.toks.next()
            k = self._exponent()
        if invert:
            k = -k
        return ex.pow_int(e, k) if k != 1 else e

    def _exponent(self):
        kind, val, pos = self.toks.next()
        if val == "-":
            kind, val, pos = self.toks.next()
            if kind != "int":
                raise ExprSyntaxError("exponent must be an integer", pos, self.text)
            return -int(val)
        if val == "(":
            k = self._exponent()
            self.toks.expect(")")
            return k
        if kind != "int":
            raise ExprSyntaxError("exponent must be an integer", pos, self.text)
        return int(val)

    def _primary(self):
        kind, val, pos = self.toks.next()
        if kind == "int":
            return ex.from_int(int(val))
        if kind == "param":
            return ex.from_symbol(HOMOTOPY)
        if val == "(":
            e = self._expr()
            self.toks.expect(")")
            return e
        if kind == "name":
            if val in _FUNCS:
                self.toks.expect("(")
                arg = self._expr()
                self.toks.expect(")")
                return ex.app(val, arg)
            return self._coordinate(val, pos)
        raise ExprSyntaxError(f"unexpected token {val!r}", pos, self.text)

    def _coordinate(self, name, pos):
        kind, val, _ = self.toks.peek()
        if val == "_":
            self.toks.next()
            if not self.space.is_field(name):
                raise UnknownCoordinateError(
                    f"{name!r} is not a field coordinate, cannot carry a jet index"
                )
            jet_names = self._jet_names(pos)
            if len(jet_names) > self.max_order:
                raise JetOrderExceededError(
                    f"jet order {len(jet_names)} exceeds the declared order {self.max_order}"
                )
            a = self.space.field_index(name)
            jet = tuple(self.space.base_index(nm) for nm in jet_names)
            return ex.from_symbol(self.space.jet_symbol(a, jet))
        if self.space.is_base(name):
            return ex.from_symbol(self.space.base_symbol(self.space.base_index(name)))
        if self.space.is_field(name):
            return ex.from_symbol(self.space.field_symbol(self.space.field_index(name)))
        if name in self.constants:
            return self.constants[name]
        raise UnknownCoordinateError(f"unknown coordinate or constant {name!r}")

    def _jet_names(self, pos):
        kind, val, p2 = self.toks.next()
        if val == "{":
            groups = []
            while True:
                kind, val, p3 = self.toks.next()
                if val == "}":
                    break
                if kind != "name":
                    raise ExprSyntaxError("expected base-coordinate name", p3, self.text)
                groups.extend(_split_jet_group(val, self.space, p3, self.text))
            if not groups:
                raise ExprSyntaxError("empty jet index braces", p2, self.text)
            return groups
        if kind == "name":
            return _split_jet_group(val, self.space, p2, self.text)
        raise ExprSyntaxError("expected jet index after '_'", p2, self.text)


def parse(text, space, constants=None, max_order=None):
    """Parse grammar text into a canonical Expression over the given space.

    constants maps names to Expressions (exact rationals are substituted,
    opaque constants stay symbolic). max_order defaults to the declared jet
    order of the space; source-form inputs pass 2r.
    """
    return Parser(text, space, constants, max_order).parse()
