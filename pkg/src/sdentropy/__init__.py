"""Entropy of stochastic processes on finite alphabets and of subshifts of finite type."""

from .core import (
    CellWord,
    Distribution,
    Partition,
    StateSpace,
    cell_mass,
    dist_entropy,
    join,
    phi,
    power_partition,
    preimage_partition,
    product_partition,
    refines,
)
from .entropy import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    EntropySeries,
    HsdEstimate,
    block_entropy,
    block_mass_profile,
    conditional_entropy_first_coord,
    entropy_series,
    hsd_estimate,
    hsd_full,
    iid_closed_form,
    joined_partition,
    markov_closed_form,
    transformation_block_entropy,
)
from .measures import (
    CylinderOracle,
    MarkovSpec,
    TransformationSpec,
    block_recode,
    consistency_violations,
    convex_mix,
    dilation_pushforward,
    factor_pushforward,
    from_transformation,
    iid,
    markov,
    oracle_mass,
    point_path,
    product_measure,
    product_sequence,
    pushforward_distribution,
    restriction_pushforward,
    shift_pushforward,
    stationary_vector,
)
from .properties import CheckConfig, CheckReport, REGISTRY, run_all, run_check
from .specfile import ParseError, parse_spec
from .topological import (
    Sft,
    ht_estimate,
    parry_measure,
    perron,
    spectral_radius,
    support_check,
    word_complexity,
)

__version__ = "0.1.0"

__all__ = [
    "block_entropy",
    "block_mass_profile",
    "block_recode",
    "BudgetExceeded",
    "cell_mass",
    "CellWord",
    "CheckConfig",
    "CheckReport",
    "conditional_entropy_first_coord",
    "consistency_violations",
    "convex_mix",
    "CylinderOracle",
    "DEFAULT_BUDGET",
    "dilation_pushforward",
    "dist_entropy",
    "Distribution",
    "entropy_series",
    "EntropySeries",
    "factor_pushforward",
    "from_transformation",
    "hsd_estimate",
    "hsd_full",
    "HsdEstimate",
    "ht_estimate",
    "iid",
    "iid_closed_form",
    "join",
    "joined_partition",
    "markov",
    "markov_closed_form",
    "MarkovSpec",
    "oracle_mass",
    "parry_measure",
    "parse_spec",
    "ParseError",
    "Partition",
    "perron",
    "phi",
    "point_path",
    "power_partition",
    "preimage_partition",
    "product_measure",
    "product_partition",
    "product_sequence",
    "pushforward_distribution",
    "refines",
    "REGISTRY",
    "restriction_pushforward",
    "run_all",
    "run_check",
    "Sft",
    "shift_pushforward",
    "spectral_radius",
    "StateSpace",
    "stationary_vector",
    "support_check",
    "transformation_block_entropy",
    "TransformationSpec",
    "word_complexity",
]
