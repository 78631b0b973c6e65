"""Pastures, matroid foundations and representability."""

from .abgroup import FpAbelianGroup, smith_normal_form
from .catalog import named
from .errors import (
    AxiomViolation,
    BudgetExceeded,
    DimensionMismatch,
    FoundryError,
    InconsistentRelation,
    MalformedWord,
    ParseError,
    PreconditionError,
    VerificationFailure,
)
from .foundation import (
    FoundationReport,
    enumerate_omega,
    foundation,
    foundation_via_diagram,
    foundation_via_lattice,
    fundamental_diagram,
    grs_presentation,
    lattice_diagram,
)
from .matroid import Matroid, direct_sum, has_minor, is_isomorphic as matroid_isomorphic
from .matroid_catalog import named_matroid
from .pasture import Diagram, Pasture, PastureMorphism, colimit, from_presentation, numerical_type, quotient, tensor
from .represent import GPFunction, is_representable, rescaling_classes, representability_row, verify_gp
from .search import automorphisms, find_isomorphism, hom_enumerate, hom_exists, identify, is_isomorphic

__version__ = "0.1.0"
