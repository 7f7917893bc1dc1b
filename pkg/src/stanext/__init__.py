"""Exact combinatorics of linear-extension counts around a pinned chain and
the equality cases of the associated log-concavity inequalities."""

from .poset import (
    ChainConfig,
    CycleDetected,
    Instance,
    OutOfRange,
    ParseError,
    Poset,
    between,
    build_poset,
    covers,
    instance_from_json,
    instance_to_json,
    load_instance,
    validate_config,
)
from .linext import (
    EQUAL,
    MINUS,
    PLUS,
    VARIANTS,
    a_sequence,
    all_counts,
    companions,
    count_extensions,
    decompose,
    iter_extensions,
)
from .criticality import (
    CLASS_CRITICAL,
    CLASS_NOT_SUBCRITICAL,
    CLASS_SUBCRITICAL,
    CLASS_SUPERCRITICAL,
    DegenerateInstance,
    beta,
    classify,
    collection_dim,
    ell_splitting_pairs,
    maximal_splitting_pair,
    mixed_elements,
    pair_criticality,
    splitting_pairs,
)
from .transforms import ClosureResult, SplitResult, closure, split, verify_split_reduction
from .ranges import bounds, feasible, feasible_oracle, profile
from .extremal import (
    CharacterizationReport,
    StanleyVerdict,
    characterize,
    equivalence_audit,
    posetchar,
    stanley,
    trivial_witness,
)
from .geometry import (
    certified_directions,
    e_uv,
    face_span,
    is_extreme,
    minus_e,
    mixed_volume,
    plus_e,
)

__version__ = "0.1.0"
