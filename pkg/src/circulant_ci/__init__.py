"""Exact isomorphism and CI-property engine for circulant (di)graphs over Z_n."""

from .cayley import (
    CayleyDigraph,
    ConnectionSet,
    OracleCutoffError,
    aut_orbit,
    build_cayley,
    brute_force_isomorphic,
    brute_force_isomorphism,
    orbit_members,
)
from .engine import (
    CiVerdict,
    ClassificationReport,
    CosetCase,
    DisagreementError,
    IsoVerdict,
    WitnessFamily,
    decide_ci,
    is_ci,
    is_ci_reduced,
    is_m_group,
    isomorphism_class,
    m_property,
    muzychuk_isomorphic,
    orbit_representatives,
    predicate_ci_group,
    predicate_dci_group,
    predicate_mci,
    predicate_mdci,
    recognize_coset_case,
    verify_theorems,
    witnesses,
    zero_key_fast_path,
)
from .keys import (
    Key,
    ZnPartition,
    almost_zero_key,
    enumerate_keys,
    enumerate_keys_prime_power,
    key_join,
    key_leq,
    key_meet,
    key_of_partition,
    key_of_set,
    key_partition,
    key_partition_prime,
    maximal_key,
    refines,
    zero_key,
)
from .multipliers import (
    GeneralizedMultiplier,
    GenuineMultiplier,
    SolvingSet,
    apply_multiplier,
    apply_multiplier_prime,
    as_permutation,
    genuine_multipliers_prime_power,
    solving_set,
)
from .zn import (
    DomainError,
    Factorization,
    InternalConsistencyError,
    crt_decode,
    crt_encode,
    element_order,
    factorize,
    generated_subgroup,
    p_adic_digits,
    subgroup_of_order,
    units,
)

__version__ = "0.1.0"

__all__ = [
    "CayleyDigraph",
    "CiVerdict",
    "ClassificationReport",
    "ConnectionSet",
    "CosetCase",
    "DisagreementError",
    "DomainError",
    "Factorization",
    "GeneralizedMultiplier",
    "GenuineMultiplier",
    "InternalConsistencyError",
    "IsoVerdict",
    "Key",
    "OracleCutoffError",
    "SolvingSet",
    "WitnessFamily",
    "ZnPartition",
    "almost_zero_key",
    "apply_multiplier",
    "apply_multiplier_prime",
    "as_permutation",
    "aut_orbit",
    "brute_force_isomorphic",
    "brute_force_isomorphism",
    "build_cayley",
    "crt_decode",
    "crt_encode",
    "decide_ci",
    "element_order",
    "enumerate_keys",
    "enumerate_keys_prime_power",
    "factorize",
    "generated_subgroup",
    "genuine_multipliers_prime_power",
    "is_ci",
    "is_ci_reduced",
    "is_m_group",
    "isomorphism_class",
    "key_join",
    "key_leq",
    "key_meet",
    "key_of_partition",
    "key_of_set",
    "key_partition",
    "key_partition_prime",
    "m_property",
    "maximal_key",
    "muzychuk_isomorphic",
    "orbit_members",
    "orbit_representatives",
    "p_adic_digits",
    "predicate_ci_group",
    "predicate_dci_group",
    "predicate_mci",
    "predicate_mdci",
    "recognize_coset_case",
    "refines",
    "solving_set",
    "subgroup_of_order",
    "units",
    "verify_theorems",
    "witnesses",
    "zero_key",
    "zero_key_fast_path",
]
