"""Exact finite metric and ultrametric spaces, one-point extensions,
monochromatic copy search, tree spaces and a finite tree Ramsey theorem."""
from .core import (
    InvalidSpace,
    MetricSpace,
    NotUltrametric,
    ScaledCopyCert,
    UltrametricSpace,
    Violation,
    canonical_form,
    check_coloring,
    color_classes,
    find_metric_violation,
    find_ultrametric_violation,
    format_rational,
    isosceles_witness,
    parse_rational,
    scale_space,
    validate_metric,
    validate_ultrametric,
    verify_scaled_copy,
)
from .katetov import (
    KatetovFunction,
    KatetovViolation,
    RequestError,
    extend_one_point,
    extension_distances,
    is_ultrametric_profile,
    realizers,
    saturate,
    validate_katetov,
)
from .copysearch import FoundCopy, Obstruction, Stage, ball_set, greedy_find_copy, oracle_find_copy
from .treespace import (
    BranchWitness,
    RegularWitness,
    TreeSpace,
    below_order,
    regularize,
    tree_to_space,
    ultrametric_to_tree,
)
from .treeramsey import (
    BranchingTree,
    MonoSubtreeCert,
    mono_subtree,
    rank_table,
    refutation_path,
    required_branching,
    verify_mono_subtree,
)
from .universal import (
    IsometricCopy,
    NoCopy,
    UniversalTree,
    auto_multiplicity,
    build_universal_tree,
    find_mono_isometric_copy,
    match_subtree,
    verify_isometric_copy,
)
from .generators import generate_random_ultrametric, random_katetov_values, random_metric
from .dot import to_dot

__version__ = "0.1.0"
