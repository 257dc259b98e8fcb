"""Büchi tree automata with qualitative spatial constraints.

The package decides emptiness of nondeterministic (and, via simulation,
alternating) Büchi automata running on infinite full k-ary trees whose
nodes carry RCC8-constrained spatial features.  Verdicts come with finite
tree-model witnesses that can be re-checked, unfolded, and rendered.
"""

from .errors import (
    DslSyntaxError,
    InadmissibleDisjunctError,
    MalformedModelError,
    ResourceLimitError,
)
from .relalg import (
    ATOMS,
    EQ_RELATION,
    Qcsp,
    QcspBuilder,
    Relation,
    compose,
    consistent_scenario,
    converse,
    is_consistent,
    parse_relation,
    path_consistency,
)
from .terms import ChainTerm, SpatialConstraint, parse_chain, parse_constraint
from .formula import (
    And,
    Constraint,
    Disjunct,
    Move,
    NegLiteral,
    Or,
    PosLiteral,
    dnf,
    partition,
)
from .automata import (
    AlternatingAutomaton,
    Metrics,
    NondetAutomaton,
    RunNode,
    RunPrefix,
    SceneNode,
    SceneTreePrefix,
    Signature,
    Transition,
    csp_of_run_prefix,
    metrics,
    validate,
    validate_run_prefix,
)
from .simulate import sim_state_bound, simulate
from .emptiness import (
    Decision,
    FiniteTreeModel,
    FtmNode,
    PtpTriple,
    WordOrder,
    backconstraints_step,
    check_bounds,
    check_witness,
    decide,
    ftm_search,
    globalcsp,
    resolve_variable,
    scene_from_witness,
    unfold,
    unfold_with_sources,
    witness_from_json,
    witness_to_dot,
    witness_to_json,
)
from .dsl import (
    AutomatonDocument,
    automaton_to_document,
    document_to_automaton,
    load_automaton,
    parse_document,
    print_automaton,
    print_document,
)

__version__ = "0.1.0"

__all__ = [
    "ATOMS",
    "EQ_RELATION",
    "Relation",
    "parse_relation",
    "compose",
    "converse",
    "Qcsp",
    "QcspBuilder",
    "path_consistency",
    "is_consistent",
    "consistent_scenario",
    "ChainTerm",
    "SpatialConstraint",
    "parse_chain",
    "parse_constraint",
    "PosLiteral",
    "NegLiteral",
    "Constraint",
    "Move",
    "And",
    "Or",
    "Disjunct",
    "dnf",
    "partition",
    "Signature",
    "Transition",
    "AlternatingAutomaton",
    "NondetAutomaton",
    "Metrics",
    "metrics",
    "validate",
    "RunNode",
    "RunPrefix",
    "SceneNode",
    "SceneTreePrefix",
    "csp_of_run_prefix",
    "validate_run_prefix",
    "simulate",
    "sim_state_bound",
    "WordOrder",
    "PtpTriple",
    "FtmNode",
    "FiniteTreeModel",
    "Decision",
    "backconstraints_step",
    "ftm_search",
    "globalcsp",
    "resolve_variable",
    "unfold",
    "unfold_with_sources",
    "scene_from_witness",
    "check_bounds",
    "check_witness",
    "decide",
    "witness_to_json",
    "witness_from_json",
    "witness_to_dot",
    "AutomatonDocument",
    "parse_document",
    "print_document",
    "document_to_automaton",
    "automaton_to_document",
    "load_automaton",
    "print_automaton",
    "DslSyntaxError",
    "InadmissibleDisjunctError",
    "MalformedModelError",
    "ResourceLimitError",
]
