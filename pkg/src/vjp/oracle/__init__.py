from .conserve import ConservationResult, MechanicalSystem, conservation_check, integrate_trajectory
from .crosscheck import CrosscheckResult, symbolic_numeric_crosscheck
from .gateaux import GateauxResult, bump_variation, gateaux_check
from .sampled import SampledSection, fd_weights, stencil

__all__ = [
    "ConservationResult",
    "CrosscheckResult",
    "GateauxResult",
    "MechanicalSystem",
    "SampledSection",
    "bump_variation",
    "conservation_check",
    "fd_weights",
    "gateaux_check",
    "integrate_trajectory",
    "stencil",
    "symbolic_numeric_crosscheck",
]
