"""Stable matching with ties and incomplete lists.

Mechanisms (deferred acceptance, index tie-breaking, tie-to-strict gadget
translation, and an in-place tie proposal algorithm), weak-stability
verification, and brute-force oracles for enumeration, approximation
ratios, and strategy-proofness audits on small instances.
"""

from .generate import GenParams, PAPER_INSTANCE_IDS, gen_instance, paper_instance
from .mechanisms import (
    Mechanism,
    MechanismId,
    MechanismPreconditionError,
    OneTmRun,
    TranslationMap,
    break_ties_by_index,
    is_admissible,
    kiraly_na,
    mgs,
    mgs_woman,
    onetm_mechanism,
    onetm_run,
    run_mechanism,
    tiebreak_mechanism,
    translate_1tm,
)
from .model import (
    EMPTY_MATCHING,
    Instance,
    InstanceClass,
    Matching,
    PersonId,
    PrefGroup,
    PrefList,
    ProblemKind,
    Side,
    Violation,
    as_groups,
    classify_instance,
    flatten,
    has_tie,
    is_valid_instance,
    man,
    prefers_matching,
    rank,
    swap_roles,
    validate_instance,
    woman,
)
from .oracle import (
    AuditResult,
    AuditVerdict,
    ManipulationWitness,
    OracleBoundError,
    RuralHospitalsReport,
    SpaceKind,
    StrategySpace,
    approx_ratio,
    candidate_lists,
    enumerate_stable_matchings,
    find_coalition_manipulation,
    find_manipulation,
    gadget_audit,
    has_unbalanced_three_path,
    lex_max_stable_matching,
    max_stable_size,
    rural_hospitals_check,
)
from .stability import (
    BlockingPair,
    BlockReason,
    blocking_pairs,
    is_stable,
    is_valid_matching,
)
from .textio import (
    ParseError,
    parse_instance,
    parse_matching,
    serialize_instance,
    serialize_matching,
    serialize_pref_list,
)

__version__ = "0.1.0"

__all__ = [
    "AuditResult",
    "AuditVerdict",
    "BlockReason",
    "BlockingPair",
    "EMPTY_MATCHING",
    "GenParams",
    "Instance",
    "InstanceClass",
    "ManipulationWitness",
    "Matching",
    "Mechanism",
    "MechanismId",
    "MechanismPreconditionError",
    "OneTmRun",
    "OracleBoundError",
    "PAPER_INSTANCE_IDS",
    "ParseError",
    "PersonId",
    "PrefGroup",
    "PrefList",
    "ProblemKind",
    "RuralHospitalsReport",
    "Side",
    "SpaceKind",
    "StrategySpace",
    "TranslationMap",
    "Violation",
    "approx_ratio",
    "as_groups",
    "blocking_pairs",
    "break_ties_by_index",
    "candidate_lists",
    "classify_instance",
    "enumerate_stable_matchings",
    "find_coalition_manipulation",
    "find_manipulation",
    "flatten",
    "gadget_audit",
    "gen_instance",
    "has_tie",
    "has_unbalanced_three_path",
    "is_admissible",
    "is_stable",
    "is_valid_instance",
    "is_valid_matching",
    "kiraly_na",
    "lex_max_stable_matching",
    "man",
    "max_stable_size",
    "mgs",
    "mgs_woman",
    "onetm_mechanism",
    "onetm_run",
    "paper_instance",
    "parse_instance",
    "parse_matching",
    "prefers_matching",
    "rank",
    "run_mechanism",
    "rural_hospitals_check",
    "serialize_instance",
    "serialize_matching",
    "serialize_pref_list",
    "swap_roles",
    "tiebreak_mechanism",
    "translate_1tm",
    "validate_instance",
    "woman",
]
