from ..jetspace import JetSpaceDescriptor, Symbol, SymbolKind
from .forms import (
    GeneralForm,
    HorizontalForm,
    SourceForm,
    components_from_current,
    current_from_components,
    horizontal_as_general,
)
from .ops import (
    ProjectableVectorField,
    Section,
    dH,
    horizontalize,
    pullback_section,
    total_derivative,
    total_derivative_multi,
)

__all__ = [
    "GeneralForm",
    "HorizontalForm",
    "JetSpaceDescriptor",
    "ProjectableVectorField",
    "Section",
    "SourceForm",
    "Symbol",
    "SymbolKind",
    "components_from_current",
    "current_from_components",
    "dH",
    "horizontal_as_general",
    "horizontalize",
    "pullback_section",
    "total_derivative",
    "total_derivative_multi",
]
