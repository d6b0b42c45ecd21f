"""Principal Albert isotopes of cyclic extensions of finite fields."""
from .ff import FieldElement, FieldSpec, make_field
from .galois import CyclicExtension, build_extension
from .twistop import TwistedOperator, reduced_norm, to_matrix, from_matrix
from .algebra import AlgebraStructure, IsotopePresentation, from_presentation, make_presentation
from .classify import canonicalize, iso_critical, iso_cubic_cases, type_partition
from .oracle import iso_bruteforce

__version__ = "0.1.0"

__all__ = [
    "FieldElement",
    "FieldSpec",
    "make_field",
    "CyclicExtension",
    "build_extension",
    "TwistedOperator",
    "reduced_norm",
    "to_matrix",
    "from_matrix",
    "AlgebraStructure",
    "IsotopePresentation",
    "from_presentation",
    "make_presentation",
    "canonicalize",
    "iso_critical",
    "iso_cubic_cases",
    "type_partition",
    "iso_bruteforce",
]
