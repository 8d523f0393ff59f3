"""Process-wide random source.

All stochastic pieces (probabilistic equality sampling, oracle trial points)
draw from this generator so that a single seed pins down every report byte.
"""

import numpy as np

_DEFAULT_SEED = 20240817

_rng = np.random.default_rng(_DEFAULT_SEED)


def set_seed(seed):
    global _rng
    _rng = np.random.default_rng(int(seed))


def get_rng():
    return _rng
