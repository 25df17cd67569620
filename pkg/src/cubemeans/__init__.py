"""Exact group arithmetic, cube complex and tree combinatorics, finitary
means, and inner-amenability classifiers."""

from .classify import (
    ActionAnnotation,
    AmalgamProblem,
    Annotation,
    HnnProblem,
    Verdict,
    WreathProblem,
    classify_amalgam,
    classify_graph_product,
    classify_graph_product_via_factors,
    classify_hnn,
    classify_raag,
    classify_racg,
    classify_wreath,
    inner_amenable_from_normal,
    product_reduction,
)
from .complexes import (
    ComplexBall,
    build_c_gamma,
    build_x_gamma_ball,
    crossing_graph,
    facing_triples,
    hyperplane_classes,
    irreducibility_check,
    join_decomposition,
    link_complex,
    strongly_separated_pairs,
    three_vertex_witness,
    vertex_stabilizer,
)
from .experiments import (
    PartitionMap,
    convolution_bound_check,
    lifting_defect_check,
    location_experiment,
    stationarity_transfer_check,
    tilde_lift,
)
from .graphs import SimpGraph, atlas_graphs
from .groups import (
    AmalgamCtx,
    CyclicCtx,
    GraphProductCtx,
    GroupCtx,
    HnnCtx,
    IntegersCtx,
    TableCtx,
    WreathCtx,
    centralizer,
    conjugacy_class,
    parse_group_spec,
    relative_centralizer_mod,
)
from .lp_search import lp_mean_search
from .means import (
    ProbVec,
    convolve,
    finite_normal_lift,
    l1_distance,
    normalized_restriction,
    pushforward,
    reverse,
    transversal_average,
)
from .suites import run_suite
from .trees import (
    TreeBall,
    bass_serre_ball,
    classify_isometry,
    factor_partition_report,
    fixed_point_set,
    halfspace_fix_mass,
    min_displacement,
    phi_profile,
)

__version__ = "0.1.0"
