"""Locally testable codes from balanced products of expanding Cayley factors.

The library builds 3-term GF(2) chain complexes by quotienting products of
group-symmetric bipartite graphs, certifies small-set vertex expansion of the
factors exhaustively, and verifies at desk scale the structural facts the
construction rests on: copy decompositions, unique-neighbor bounds, the
weighted small-set testability inequality, and exact soundness.
"""

from .analysis import (
    C1Vector,
    CodeInstance,
    DistanceReport,
    FlipResult,
    LocallyMinimalDistance,
    LTProfile,
    SmallSetCheck,
    SoundnessReport,
    boundary_1,
    c0_weighted_norm,
    code_from_complex,
    distance_certificate,
    greedy_flip,
    is_locally_minimal,
    locally_minimal_distance,
    lt_profile,
    sharp_example,
    small_set_epsilon,
    small_set_ltc_check,
    small_set_suite,
    soundness_exhaustive,
    soundness_from_lt,
    soundness_sampled,
    square_count,
    weighted_norm,
)
from .errors import (
    BudgetExceededError,
    ConfigError,
    DegenerateCodeError,
    ExpanderLtcError,
    FreenessViolationError,
    InvalidParameterError,
    InvalidWedgeError,
    IrregularGraphError,
    MultiplicityViolationError,
    PreconditionViolationError,
    SearchExhaustedError,
    SizeLimitError,
)
from .f2 import BitMatrix, BitVector, kernel_basis, min_weight_nonzero, rank, solve
from .formats import (
    matrix_from_alist,
    matrix_from_dense_text,
    matrix_to_alist,
    matrix_to_dense_text,
)
from .graphs import (
    BipartiteGraph,
    DegreeSplit,
    ExpansionCertificate,
    Regularity,
    cayley_left,
    cayley_right,
    certify_expansion,
    check_edge_count_lemma,
    check_invariance,
    check_regularity,
    check_unique_neighbor_lemma,
    degree_split,
    graph_from_edge_list,
    graph_to_edge_list,
    majorizes,
    unique_neighbors,
)
from .groups import (
    FiniteGroup,
    GroupAction,
    OrbitLabeling,
    block_action,
    group_from_spec,
    is_free_action,
    left_regular_action,
    make_cyclic,
    make_direct_product,
    orbit_labeling,
    right_regular_action_as_left,
    subgroup,
    trivial_action,
)
from .products import (
    BalancedProductComplex,
    GraphAction,
    HypergraphProduct,
    OneDSubgraph,
    balanced_product,
    hypergraph_product,
    inherited_expansion,
    left_right_cayley,
    one_d_subgraph,
    regular_graph_action,
    verify_chain_identity,
    verify_copy_decomposition,
)
from .search import (
    SearchResult,
    SearchSpec,
    combined_epsilon,
    layered_cayley,
    random_cayley,
    random_generating_set,
    search_pair,
    unbalance,
)

__version__ = "0.1.0"
