"""Hypergraph container toolkit.

Container builders (cover, hard-core and interpolating modes), an exact
hard-core probability engine, probability bounds and the checks that tie
them together.
"""

__version__ = "0.1.0"

from .bounds import (
    EfficientParams,
    construct_cover,
    construct_cover_details,
    harris_bound,
    janson_bound,
    key_inequality_check,
    lymb_sum,
)
from .containers import (
    AlgorithmError,
    AlgorithmParams,
    ContainerFamily,
    ContainerOutput,
    DeterminismError,
    ParameterError,
    build_cover_container,
    build_family,
    build_hardcore_container,
    build_interpolating_container,
)
from .exact import (
    conditional_expected_size,
    conditional_subset_prob,
    independent_sets,
    mc_prob_independent,
    partition_function,
    prob_independent,
)
from .hypergraph import Hypergraph, members, vset, weight
from .report import VerificationReport

__all__ = [
    "__version__",
    "Hypergraph",
    "vset",
    "members",
    "weight",
    "AlgorithmParams",
    "AlgorithmError",
    "DeterminismError",
    "ParameterError",
    "ContainerOutput",
    "ContainerFamily",
    "build_cover_container",
    "build_hardcore_container",
    "build_interpolating_container",
    "build_family",
    "independent_sets",
    "partition_function",
    "prob_independent",
    "conditional_subset_prob",
    "conditional_expected_size",
    "mc_prob_independent",
    "EfficientParams",
    "construct_cover",
    "construct_cover_details",
    "harris_bound",
    "janson_bound",
    "key_inequality_check",
    "lymb_sum",
    "VerificationReport",
]
