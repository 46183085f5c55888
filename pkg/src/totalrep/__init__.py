"""Finite labeled forests, their h-degrees, and executable Baire-space semantics."""

from ._accel import BACKEND
from .baire import (
    Determined,
    Identity,
    Membership,
    Pattern,
    Possible,
    PrefixPartition,
    Rule,
    TableTransducer,
    Transducer,
    combinator_oplus,
    combinator_push,
    combinator_sup,
    exact_value,
    index_of,
    pi_eval,
    realized_value,
    realizer_for,
    run_transducer,
    synthesize_realizer,
    totalize,
    word_at,
    xi_eval,
    xi_partition,
)
from .degrees import DegreeSpace, minimize
from .errors import *  # noqa: F401,F403
from .forest import (
    LabeledForest,
    LabeledPoset,
    Morphism,
    canonical_form,
    canonical_forest,
    equiv_h,
    find_morphism,
    is_minimal,
    join,
    join_all,
    leq_h,
    push,
    relabel,
    unfold,
    validate_forest,
)
from .hierarchy import (
    FiniteUniverse,
    IndexedFamily,
    ProductUniverse,
    cantor_pair,
    diff_op,
    omega_boolean,
    parity,
    reduce_family,
    sigma02_set,
    uniformize_sigma02,
)
from .lattice import (
    DegreeLattice,
    LatticeIso,
    SmainReport,
    TreePoset,
    automorphic,
    er_reduce,
    ideal_isomorphism,
    lattice_iso,
    lattice_L,
    lattice_Lstar,
    poset_iso,
    principal_ideal,
    smain_check,
    tree_poset,
)
from .textio import export_dot, format_forest, parse_forest, parse_poset

__version__ = "0.1.0"
