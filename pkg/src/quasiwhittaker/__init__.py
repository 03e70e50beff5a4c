"""Exact computations with quasi-Whittaker modules for the Schroedinger algebra."""

from .exact import Poly, RatMatrix, nullspace, poly_bezout, poly_rem, rank
from .qwmod import (
    AdaptedElem,
    ModElem,
    act,
    apply_annihilation_power,
    convert_basis,
    is_qw_vector,
    qw_vector_basis,
    verify_reduction_lemmas,
)
from .structure import (
    FactoredPoly,
    FiniteQW,
    QuotElem,
    annihilator_contains,
    act_simple,
    composition_series,
    cyclic_reduction,
    decompose,
    local_finiteness_dim,
    make_finite,
    maximal_submodules,
    qw_vectors_in_finite,
    simple_quotient,
    submodule_generator,
)
from .uea import (
    UEAElem,
    WhittakerType,
    adapted_elements,
    bracket_gen,
    casimir_c0,
    commutator,
    mul,
    normalize,
    verify_uea_identities,
)

__version__ = "0.1.0"
