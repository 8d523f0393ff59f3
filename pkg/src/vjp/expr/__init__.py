from .expression import (
    ONE,
    ZERO,
    App,
    Expression,
    PolyBase,
    add,
    app,
    cos,
    div,
    evaluate,
    exp,
    from_fraction,
    from_int,
    from_symbol,
    invert,
    mul,
    partial,
    pow_int,
    scale,
    sin,
    substitute,
    to_grammar,
)
from .equality import EqualsResult, equals, is_zero, is_zero_sampled
from .integrate import integrate_t
from .parser import parse
from .quadrature import nquad

__all__ = [
    "ONE",
    "ZERO",
    "App",
    "EqualsResult",
    "Expression",
    "PolyBase",
    "add",
    "app",
    "cos",
    "div",
    "equals",
    "evaluate",
    "exp",
    "from_fraction",
    "from_int",
    "from_symbol",
    "integrate_t",
    "invert",
    "is_zero",
    "is_zero_sampled",
    "mul",
    "nquad",
    "parse",
    "partial",
    "pow_int",
    "scale",
    "sin",
    "substitute",
    "to_grammar",
]
