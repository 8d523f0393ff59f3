"""Randomized numeric cross-check of symbolic identities."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import UndecidableEquality
from ..expr.equality import RESAMPLE_CAP, TAU_EQ, _sample_point
from ..rng import get_rng
from .. import expr as ex


@dataclass
class CrosscheckResult:
    passed: bool
    max_deviation: float
    trials: int

    def __bool__(self):
        return self.passed


def symbolic_numeric_crosscheck(lhs, rhs, trials=32, tau=TAU_EQ, rng=None):
    """Evaluate both sides at random points; pass iff max deviation < tau."""
    rng = rng or get_rng()
    symbols = sorted((lhs - rhs).free_symbols() | lhs.free_symbols())
    worst = 0.0
    done = 0
    for _ in range(trials):
        for _attempt in range(RESAMPLE_CAP + 1):
            env = _sample_point(symbols, rng)
            try:
                with np.errstate(all="raise"):
                    a = float(ex.evaluate(lhs, env))
                    b = float(ex.evaluate(rhs, env))
            except (FloatingPointError, ZeroDivisionError, OverflowError):
                continue
            if np.isfinite(a) and np.isfinite(b):
                break
        else:
            raise UndecidableEquality("crosscheck undecidable at sampled points")
        worst = max(worst, abs(a - b) / max(1.0, abs(a), abs(b)))
        done += 1
    return CrosscheckResult(worst < tau, worst, done)
