from .atlas import Atlas, Chart, Overlap
from .classes import (
    ClassReport,
    NO_GLOBAL_SOLUTIONS,
    Representative,
    check_section_global,
    collate_delta_representative,
    delta_class,
    delta_prime_class,
    global_existence_report,
    isomorphism_hypothesis_check,
    pullback_class_check,
    source_projection,
)
from .cycles import Cycle, CycleLeg, FaceMatch, ParamSpace, param_symbol
from .presentation import (
    LocalPresentation,
    build_presentation,
    cech_coboundary,
    check_source_consistency,
)

__all__ = [
    "Atlas",
    "Chart",
    "ClassReport",
    "Cycle",
    "CycleLeg",
    "FaceMatch",
    "LocalPresentation",
    "NO_GLOBAL_SOLUTIONS",
    "Overlap",
    "ParamSpace",
    "Representative",
    "build_presentation",
    "cech_coboundary",
    "check_section_global",
    "check_source_consistency",
    "collate_delta_representative",
    "delta_class",
    "delta_prime_class",
    "global_existence_report",
    "isomorphism_hypothesis_check",
    "param_symbol",
    "pullback_class_check",
    "source_projection",
]
