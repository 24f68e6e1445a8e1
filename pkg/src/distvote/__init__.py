"""distvote: simulation and worst-case analysis of district-based elections.

Voters are partitioned into weighted districts; each district elects a
local winner with a voting rule, and the overall winner maximizes the
weighted approval score over district wins.  The package measures the
social-welfare distortion of this process, evaluates its closed-form
worst-case bounds, generates tight adversarial instances, and implements
districting algorithms that pick the partition.
"""

from .bounds import (
    BoundQuery,
    gamma_bound,
    ordinal_lower_bound,
    pv_bound,
    rv_bound,
)
from .core import (
    ADVERSARIAL,
    FIXED,
    SYMMETRIC,
    UNRESTRICTED,
    UNWEIGHTED,
    DistrictPartition,
    OrdinalProfile,
    TieBreakOrder,
    ValuationProfile,
    WeightVector,
    classify,
    induce_ordinal,
    restrict,
    social_welfare,
)
from .districting import (
    DistrictingResult,
    TopChoiceProfile,
    bad_partition_search,
    brute_force_districting,
    enumerate_symmetric_partitions,
    plurality_districting,
    random_partition,
)
from .engine import (
    DistortionReport,
    DistrictElection,
    ElectionOutcome,
    distortion,
    run_and_measure,
    run_election,
)
from .errors import DataError, DistVoteError, DomainError, ResourceGuardError
from .generators import (
    CPartitionInstance,
    GeneratedInstance,
    gen_t2,
    gen_t3,
    gen_t4,
    gen_t5,
    gen_t6_gadget,
    gen_t9,
)
from .rules import VotingRuleSpec, apply_rule, parse_rule, preset, respects_pareto

__version__ = "0.1.0"

__all__ = [
    "ADVERSARIAL",
    "FIXED",
    "SYMMETRIC",
    "UNRESTRICTED",
    "UNWEIGHTED",
    "BoundQuery",
    "CPartitionInstance",
    "DataError",
    "DistortionReport",
    "DistrictElection",
    "DistrictPartition",
    "DistrictingResult",
    "DistVoteError",
    "DomainError",
    "ElectionOutcome",
    "GeneratedInstance",
    "OrdinalProfile",
    "ResourceGuardError",
    "TieBreakOrder",
    "TopChoiceProfile",
    "ValuationProfile",
    "VotingRuleSpec",
    "WeightVector",
    "apply_rule",
    "bad_partition_search",
    "brute_force_districting",
    "classify",
    "distortion",
    "enumerate_symmetric_partitions",
    "gamma_bound",
    "gen_t2",
    "gen_t3",
    "gen_t4",
    "gen_t5",
    "gen_t6_gadget",
    "gen_t9",
    "induce_ordinal",
    "ordinal_lower_bound",
    "parse_rule",
    "plurality_districting",
    "preset",
    "pv_bound",
    "random_partition",
    "respects_pareto",
    "restrict",
    "run_and_measure",
    "run_election",
    "rv_bound",
    "social_welfare",
]
