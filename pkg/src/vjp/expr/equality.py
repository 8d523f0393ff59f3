"""Expression equality: canonical first, randomized sampling as fallback.

Zero-testing with transcendentals is undecidable in general; the documented
probabilistic contract is: N sample points per free symbol drawn uniformly
from [-2,-0.1] u [0.1,2], agreement within tau_eq at every point. A sample
point where evaluation is singular (division blow-up, overflow) is redrawn
up to M times before the comparison is declared undecidable.
"""

from __future__ import annotations

import numpy as np

from ..errors import UndecidableEquality
from ..jetspace import SymbolKind
from ..rng import get_rng
from . import expression as ex

N_SAMPLES = 16
TAU_EQ = 1e-9
RESAMPLE_CAP = 5

_SINGULAR = 1e12


class EqualsResult:
    """Boolean verdict plus which path decided it ('canonical' or 'sampled')."""

    __slots__ = ("value", "decided_by")

    def __init__(self, value, decided_by):
        self.value = value
        self.decided_by = decided_by

    def __bool__(self):
        return self.value

    def __repr__(self):
        return f"EqualsResult({self.value}, {self.decided_by!r})"


def _draw(rng, size):
    mag = rng.uniform(0.1, 2.0, size=size)
    sign = rng.choice([-1.0, 1.0], size=size)
    return mag * sign


def _sample_point(symbols, rng):
    env = {}
    for s in symbols:
        if s.kind == SymbolKind.CONST and s.value is not None:
            env[s] = s.value
        else:
            env[s] = float(_draw(rng, None))
    return env


def is_zero_sampled(e, n_samples=N_SAMPLES, tau=TAU_EQ, rng=None):
    rng = rng or get_rng()
    symbols = sorted(e.free_symbols())
    for _ in range(n_samples):
        for attempt in range(RESAMPLE_CAP + 1):
            env = _sample_point(symbols, rng)
            try:
                with np.errstate(all="raise"):
                    val = ex.evaluate(e, env)
            except (FloatingPointError, ZeroDivisionError, OverflowError):
                continue
            if not np.isfinite(val) or abs(val) > _SINGULAR:
                continue
            break
        else:
            raise UndecidableEquality(
                f"undecidable at sampled points after {RESAMPLE_CAP} resamples"
            )
        if abs(val) > tau:
            return False
    return True


def equals(a, b, tau=TAU_EQ, rng=None):
    """Canonical equality, falling back to randomized sampling."""
    diff = a - b
    if diff.is_zero():
        return EqualsResult(True, "canonical")
    verdict = is_zero_sampled(diff, tau=tau, rng=rng)
    return EqualsResult(verdict, "sampled")


def is_zero(e, tau=TAU_EQ, rng=None):
    if e.is_zero():
        return EqualsResult(True, "canonical")
    return EqualsResult(is_zero_sampled(e, tau=tau, rng=rng), "sampled")
