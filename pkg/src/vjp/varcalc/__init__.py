from .euler import Lagrangian, euler_lagrange, first_variation, ibp_boundary
from .helmholtz import HelmholtzResult, helmholtz_check, helmholtz_residuals
from .homotopy import dH_homotopy
from .lie import lie_derivative_lagrangian, lie_derivative_source
from .noether import (
    NoetherData,
    admissibility_checks,
    classify_symmetry,
    noether_bessel_hagen_current,
    noether_data,
    strong_noether_current,
)
from .tonti import tonti_lagrangian

__all__ = [
    "HelmholtzResult",
    "Lagrangian",
    "NoetherData",
    "admissibility_checks",
    "classify_symmetry",
    "dH_homotopy",
    "euler_lagrange",
    "first_variation",
    "helmholtz_check",
    "helmholtz_residuals",
    "ibp_boundary",
    "lie_derivative_lagrangian",
    "lie_derivative_source",
    "noether_bessel_hagen_current",
    "noether_data",
    "strong_noether_current",
    "tonti_lagrangian",
]
