"""loccdist: LOCC distinguishability of orthogonal bipartite product states.

Library surface: validated product-state sets, structural analysis
(irreducibility, unextendability, completing states), rectangular
representations with a constructive builder and an exhaustive search, the
complete 3x3 classification, and measurement-protocol generation with an
independent reliability simulator.
"""

from .numerics import TolerancePolicy
from .states import OrthogonalProductSet, ProductState, parse_states, serialize_states
from .analysis import (
    is_irreducible,
    is_extendable,
    is_upb,
    orthogonal_complement,
    subset_spans_product_space,
    opb_indistinguishable_general,
    find_nonaligned_set,
)
from .rectrep import (
    RectDecomposition,
    RectRepresentation,
    r9,
    realize,
    verify_representation,
    construct_rect_rep_3x3,
    enumerate_decompositions,
    search_rect_rep,
)
from .classify import classify_3x3, classify_general, class3_predicate
from .protocol import (
    ProtocolTree,
    simulate,
    reliability,
    gen_propdist_protocol,
    gen_two_copy_protocol,
    synthesize_protocol,
)
from . import catalog, errors

__all__ = [
    "TolerancePolicy",
    "OrthogonalProductSet",
    "ProductState",
    "parse_states",
    "serialize_states",
    "is_irreducible",
    "is_extendable",
    "is_upb",
    "orthogonal_complement",
    "subset_spans_product_space",
    "opb_indistinguishable_general",
    "find_nonaligned_set",
    "RectDecomposition",
    "RectRepresentation",
    "r9",
    "realize",
    "verify_representation",
    "construct_rect_rep_3x3",
    "enumerate_decompositions",
    "search_rect_rep",
    "classify_3x3",
    "classify_general",
    "class3_predicate",
    "ProtocolTree",
    "simulate",
    "reliability",
    "gen_propdist_protocol",
    "gen_two_copy_protocol",
    "synthesize_protocol",
    "catalog",
    "errors",
]

__version__ = "0.1.0"
