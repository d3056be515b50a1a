"""Derived smooth induction on split p-adic reductive groups: exact vanishing tables."""

from .cohomology import Block, GradedDims, blocks_of_degree, cohomology_dims, exterior_power_rank
from .filtration import (
    FiltrationShape,
    congruence_shape,
    conjugate,
    frattini_dims,
    intersect,
    intersection_shape,
    p_power,
)
from .rootdata import (
    Cocharacter,
    GroupProfile,
    RootSystem,
    build_root_system,
    enumerate_dominant,
    find_deep_dominant,
    i0,
    make_profile,
    pairing,
    top_dimension,
)
from .transition import (
    TransitionQuery,
    block_fate,
    diagonal_vanishing,
    ext_table,
    factor_rank,
    nonvanishing_witness,
    res_is_zero_for_all_z,
    strict_inclusion_check,
    vanishing_table,
)

__version__ = "0.1.0"
