"""Desk-scale laboratory for total search problems.

Five problem kinds with one verifier; constructive solvers and a brute
enumerator kept as independent routes to the same answers; reductions
that carry solutions backwards; a sequence-rewriting reduction whose gap
is probed empirically rather than assumed; and a playable bipartition
game wired to the same predicates.
"""

from .core import (
    DomainError,
    EvaluableMap,
    FiniteSet,
    MAX_WIDTH,
    SizeLimitError,
    derived_map,
    equality_relation,
    kernel_relation,
    table_map,
)
from .problems import (
    Certificate,
    ConstrainedLongChoiceInstance,
    KindMismatchError,
    LocalOptInstance,
    LongChoiceInstance,
    PigeonInstance,
    QuotientPigeonInstance,
    Verdict,
    verify_solution,
)
from .oracles import (
    enumerate_solutions,
    solve_localopt_walk,
    solve_long_choice_majority,
    solve_qp_walk,
)
from .reductions import (
    PullbackFailure,
    ReductionArtifact,
    ReductionSoundnessError,
    apply_pullback,
    defix_pipeline,
    localopt_pipeline,
    normalize_pipeline,
    reduce_pigeon_to_qp,
)
from .lc_reduction import (
    HuntConfig,
    PrefixCollisionError,
    check_solutions,
    hunt_counterexamples,
    reduce_qp_to_clc,
    rewrite_sequence,
)
from .generators import GeneratorConfig, gen_instance
from .roundtrip import RoundTripReport, roundtrip_test
from .suite import SuiteConfig, run_suite

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "ConstrainedLongChoiceInstance",
    "DomainError",
    "EvaluableMap",
    "FiniteSet",
    "GeneratorConfig",
    "HuntConfig",
    "KindMismatchError",
    "LocalOptInstance",
    "LongChoiceInstance",
    "MAX_WIDTH",
    "PigeonInstance",
    "PrefixCollisionError",
    "PullbackFailure",
    "QuotientPigeonInstance",
    "ReductionArtifact",
    "ReductionSoundnessError",
    "RoundTripReport",
    "SizeLimitError",
    "SuiteConfig",
    "Verdict",
    "apply_pullback",
    "check_solutions",
    "defix_pipeline",
    "derived_map",
    "enumerate_solutions",
    "equality_relation",
    "gen_instance",
    "hunt_counterexamples",
    "kernel_relation",
    "localopt_pipeline",
    "normalize_pipeline",
    "reduce_pigeon_to_qp",
    "reduce_qp_to_clc",
    "rewrite_sequence",
    "roundtrip_test",
    "run_suite",
    "solve_localopt_walk",
    "solve_long_choice_majority",
    "solve_qp_walk",
    "table_map",
    "verify_solution",
]
