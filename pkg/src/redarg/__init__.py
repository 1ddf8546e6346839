"""Toolkit for detecting, removing, and verifying redundant function
arguments in many-sorted term rewriting systems."""

from .errors import (
    ArityMismatch,
    EmptySort,
    NoGroundConstant,
    NotAConstructorSystem,
    ParseError,
    PositionOutOfRange,
    PreconditionUnmet,
    RedargError,
    SortMismatch,
    WellFormednessError,
)
from .terms import (
    App,
    FuncSymbol,
    Position,
    Substitution,
    Term,
    Var,
    format_position,
    format_term,
    is_ground,
    is_linear,
    match,
    pos_fi,
    positions,
    replace,
    sort_of,
    subterm,
    unify,
    unify_up_to_arg,
    vars_of,
)
from .trs import (
    CriticalPair,
    PropertyReport,
    Rule,
    Trs,
    build_property_report,
    check_completely_defined,
    check_confluence,
    check_constructor_system,
    check_left_linear,
    check_seval_defined,
    critical_pairs,
    designated_constant,
    designated_constants,
    format_trs,
    parse_term,
    parse_trs,
    rules_alpha_equal,
)
from .rewrite import (
    EvalOutcome,
    SemanticsResult,
    bounded_semantics,
    evaluate,
    joinable,
    normalize,
    rewrite_step,
)
from .analysis import (
    AnalysisConfig,
    AnalysisResult,
    FITriple,
    RedundancySet,
    analyze,
    fi_triples,
    is_fi_redundant_var,
    pattern_case,
    redundant_positions,
    sigma_c,
    tau_transform,
    variable_case,
)
from .erasure import (
    ErasedTrs,
    SyntacticErasure,
    erase_term,
    erase_trs,
    erasure_from_analysis,
    identity_erasure,
    reduced_erasure,
)
from .oracle import (
    Counterexample,
    EnumBounds,
    NoCounterexampleUpTo,
    VerifyReport,
    brute_force_redundant,
    differential_verify,
    enumerate_contexts,
    enumerate_ground_terms,
)

__version__ = "0.1.0"

__all__ = [
    "App",
    "AnalysisConfig",
    "AnalysisResult",
    "ArityMismatch",
    "Counterexample",
    "CriticalPair",
    "EmptySort",
    "EnumBounds",
    "ErasedTrs",
    "EvalOutcome",
    "FITriple",
    "FuncSymbol",
    "NoCounterexampleUpTo",
    "NoGroundConstant",
    "NotAConstructorSystem",
    "ParseError",
    "Position",
    "PositionOutOfRange",
    "PreconditionUnmet",
    "PropertyReport",
    "RedargError",
    "RedundancySet",
    "Rule",
    "SemanticsResult",
    "SortMismatch",
    "Substitution",
    "SyntacticErasure",
    "Term",
    "Trs",
    "Var",
    "VerifyReport",
    "WellFormednessError",
    "analyze",
    "bounded_semantics",
    "brute_force_redundant",
    "build_property_report",
    "check_completely_defined",
    "check_confluence",
    "check_constructor_system",
    "check_left_linear",
    "check_seval_defined",
    "critical_pairs",
    "designated_constant",
    "designated_constants",
    "differential_verify",
    "enumerate_contexts",
    "enumerate_ground_terms",
    "erase_term",
    "erase_trs",
    "erasure_from_analysis",
    "evaluate",
    "fi_triples",
    "format_position",
    "format_term",
    "format_trs",
    "identity_erasure",
    "is_fi_redundant_var",
    "is_ground",
    "is_linear",
    "joinable",
    "match",
    "normalize",
    "parse_term",
    "parse_trs",
    "pattern_case",
    "pos_fi",
    "positions",
    "redundant_positions",
    "reduced_erasure",
    "replace",
    "rewrite_step",
    "rules_alpha_equal",
    "sigma_c",
    "sort_of",
    "subterm",
    "tau_transform",
    "unify",
    "unify_up_to_arg",
    "variable_case",
    "vars_of",
]
