"""Shared corpus helpers for the test suite."""

from fractions import Fraction

from vjp import expr as E


def rand_poly(sp, rng, order=1, terms=3, degree=2):
    """Small random polynomial over base/fiber/jet symbols."""
    syms = [sp.base_symbol(i) for i in range(1, sp.n + 1)]
    for a in range(1, sp.m + 1):
        for jet in sp.multi_indices(order):
            syms.append(sp.jet_symbol(a, jet))
    total = E.ZERO
    for _ in range(terms):
        term = E.from_fraction(Fraction(rng.randint(-3, 3)))
        for _ in range(rng.randint(1, degree)):
            term = term * E.from_symbol(rng.choice(syms))
        total = total + term
    return total
