"""Automaton models over full k-ary trees with RCC8-constrained features.

Two transition models share a signature: the alternating model maps each
state to a positive transition formula, the nondeterministic one to a set of
explicit transitions with one successor per direction.  Both run on infinite
full k-ary trees whose nodes carry a concept set and a qualitative spatial
valuation of the feature names; the trees themselves are never materialised,
only finite run prefixes are.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from . import formula as fm
from .relalg import Qcsp, QcspBuilder, Relation, is_consistent, parse_relation
from .terms import ChainTerm, SpatialConstraint

__all__ = [
    "Signature",
    "ChainTerm",
    "SpatialConstraint",
    "Transition",
    "AlternatingAutomaton",
    "NondetAutomaton",
    "Automaton",
    "Metrics",
    "RunNode",
    "RunPrefix",
    "SceneNode",
    "SceneTreePrefix",
    "PrefixReport",
    "validate",
    "metrics",
    "csp_of_run_prefix",
    "validate_run_prefix",
    "run_prefix_to_json",
    "run_prefix_from_json",
    "scene_prefix_to_json",
    "scene_prefix_from_json",
]

Word = Tuple[str, ...]
NodeVar = Tuple[Word, str]


@dataclass(frozen=True)
class Signature:
    """Directions (ordered, defining the branching), concepts, features."""

    directions: Tuple[str, ...]
    concepts: Tuple[str, ...]
    features: Tuple[str, ...]

    @property
    def k(self) -> int:
        return len(self.directions)


@dataclass(frozen=True)
class Transition:
    """One nondeterministic transition: literals, constraints, successors."""

    literals: FrozenSet[Union[fm.PosLiteral, fm.NegLiteral]]
    constraints: FrozenSet[SpatialConstraint]
    succ: Tuple[str, ...]

    def sort_key(self) -> Tuple:
        return (
            tuple(sorted(fm.encode_generator(lit) for lit in self.literals)),
            tuple(sorted(c.encode() for c in self.constraints)),
            self.succ,
        )


@dataclass(frozen=True)
class AlternatingAutomaton:
    sig: Signature
    states: Tuple[str, ...]
    initial: str
    accepting: FrozenSet[str]
    delta: Mapping[str, fm.Formula]


@dataclass(frozen=True)
class NondetAutomaton:
    """Nondeterministic model; ``accept_all`` names the sink that accepts
    every subtree (it must be accepting and carry exactly its self loop)."""

    sig: Signature
    states: Tuple[str, ...]
    initial: str
    accepting: FrozenSet[str]
    delta: Mapping[str, Tuple[Transition, ...]]
    accept_all: Optional[str] = None

    def transitions(self, state: str) -> Tuple[Transition, ...]:
        return self.delta.get(state, ())


Automaton = Union[AlternatingAutomaton, NondetAutomaton]


def _iter_constraints(automaton: Automaton) -> Iterator[SpatialConstraint]:
    if isinstance(automaton, AlternatingAutomaton):
        for state in automaton.states:
            formula = automaton.delta.get(state)
            if formula is None:
                continue
            for gen in fm.generators(formula):
                if isinstance(gen, fm.Constraint):
                    yield gen.constraint
    else:
        for state in automaton.states:
            for transition in automaton.delta.get(state, ()):
                yield from transition.constraints


def _check_constraint(
    sig: Signature, constraint: SpatialConstraint, where: str, defects: List[str]
) -> None:
    if constraint.rel.is_empty():
        defects.append(f"{where}: empty relation in {constraint}")
    for term in constraint.args:
        for direction in term.path:
            if direction not in sig.directions:
                defects.append(f"{where}: unknown direction '{direction}' in {constraint}")
        if term.feature not in sig.features:
            defects.append(f"{where}: unknown feature '{term.feature}' in {constraint}")


def _check_literal(
    sig: Signature,
    literal: Union[fm.PosLiteral, fm.NegLiteral],
    where: str,
    defects: List[str],
) -> None:
    if literal.name not in sig.concepts:
        defects.append(f"{where}: unknown concept '{literal.name}'")


def validate(automaton: Automaton) -> List[str]:
    """Collect structural defects; an empty list means the automaton is
    well formed."""
    defects: List[str] = []
    sig = automaton.sig
    if not sig.directions:
        defects.append("signature: no directions declared")
    for kind, names in (
        ("direction", sig.directions),
        ("concept", sig.concepts),
        ("feature", sig.features),
        ("state", automaton.states),
    ):
        seen = set()
        for name in names:
            if name in seen:
                defects.append(f"signature: duplicate {kind} '{name}'")
            seen.add(name)
    pools = {
        "directions": set(sig.directions),
        "concepts": set(sig.concepts),
        "features": set(sig.features),
    }
    for (kind_a, pool_a), (kind_b, pool_b) in (
        (("directions", pools["directions"]), ("concepts", pools["concepts"])),
        (("directions", pools["directions"]), ("features", pools["features"])),
        (("concepts", pools["concepts"]), ("features", pools["features"])),
    ):
        for name in sorted(pool_a & pool_b):
            defects.append(f"signature: '{name}' declared as both {kind_a[:-1]} and {kind_b[:-1]}")

    states = set(automaton.states)
    if automaton.initial not in states:
        defects.append(f"initial: unknown state '{automaton.initial}'")
    for state in sorted(automaton.accepting - states):
        defects.append(f"accepting: unknown state '{state}'")
    for state in automaton.delta:
        if state not in states:
            defects.append(f"delta: unknown state '{state}'")

    if isinstance(automaton, AlternatingAutomaton):
        for state in automaton.states:
            formula = automaton.delta.get(state)
            where = f"delta {state}"
            if formula is None:
                defects.append(f"{where}: missing transition formula")
                continue
            for gen in fm.generators(formula):
                if isinstance(gen, (fm.PosLiteral, fm.NegLiteral)):
                    _check_literal(sig, gen, where, defects)
                elif isinstance(gen, fm.Constraint):
                    _check_constraint(sig, gen.constraint, where, defects)
                elif isinstance(gen, fm.Move):
                    if gen.direction not in sig.directions:
                        defects.append(f"{where}: unknown direction '{gen.direction}'")
                    if gen.state not in states:
                        defects.append(f"{where}: unknown state '{gen.state}'")
        return defects

    for state in automaton.states:
        for index, transition in enumerate(automaton.delta.get(state, ())):
            where = f"delta {state} transition {index + 1}"
            if len(transition.succ) != sig.k:
                defects.append(
                    f"{where}: {len(transition.succ)} successors for {sig.k} directions"
                )
            for target in transition.succ:
                if target not in states:
                    defects.append(f"{where}: unknown state '{target}'")
            positive = {
                lit.name for lit in transition.literals if isinstance(lit, fm.PosLiteral)
            }
            negative = {
                lit.name for lit in transition.literals if isinstance(lit, fm.NegLiteral)
            }
            for name in sorted(positive & negative):
                defects.append(f"{where}: complementary literal pair on '{name}'")
            for literal in transition.literals:
                _check_literal(sig, literal, where, defects)
            for constraint in transition.constraints:
                _check_constraint(sig, constraint, where, defects)

    sink = automaton.accept_all
    if sink is not None:
        if sink not in states:
            defects.append(f"acceptall: unknown state '{sink}'")
        else:
            if sink not in automaton.accepting:
                defects.append(f"acceptall: '{sink}' must be accepting")
            expected = Transition(frozenset(), frozenset(), (sink,) * sig.k)
            if automaton.delta.get(sink, ()) != (expected,):
                defects.append(
                    f"acceptall: '{sink}' must carry exactly its empty self loop"
                )
    return defects


@dataclass(frozen=True)
class Metrics:
    """Size parameters of an automaton's constraint usage.

    ``constraint_count`` counts distinct constraints, ``chain_length`` is the
    longest chain argument (a bare feature counts 1, empty defaults to 1),
    and ``arity`` is the constraint arity, fixed at 2 for RCC8.
    """

    constraint_count: int
    chain_length: int
    arity: int = 2

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.constraint_count, self.chain_length, self.arity)


def metrics(automaton: Automaton) -> Metrics:
    constraints = set(_iter_constraints(automaton))
    chain_length = 1
    for constraint in constraints:
        for term in constraint.args:
            chain_length = max(chain_length, term.length)
    return Metrics(constraint_count=len(constraints), chain_length=chain_length)


# ---------------------------------------------------------------------------
# Run prefixes and qualitative scenes


@dataclass(frozen=True)
class RunNode:
    state: str
    literals: FrozenSet[Union[fm.PosLiteral, fm.NegLiteral]]
    constraints: FrozenSet[SpatialConstraint]
    children: Tuple["RunNode", ...] = ()


@dataclass(frozen=True)
class RunPrefix:
    """A finite full k-ary tree of run labels, depth counted in edges."""

    k: int
    depth: int
    root: RunNode


@dataclass(frozen=True)
class SceneNode:
    concepts: FrozenSet[str]
    scene: Qcsp
    children: Tuple["SceneNode", ...] = ()


@dataclass(frozen=True)
class SceneTreePrefix:
    k: int
    depth: int
    root: SceneNode


def _walk_run(prefix: RunPrefix) -> Iterator[Tuple[Word, RunNode]]:
    stack: List[Tuple[Word, RunNode]] = [((), prefix.root)]
    while stack:
        word, node = stack.pop()
        yield word, node
        for index in range(len(node.children) - 1, -1, -1):
            stack.append((word + (str(index),), node.children[index]))


def _run_nodes_by_word(
    prefix: RunPrefix, directions: Sequence[str]
) -> Dict[Word, RunNode]:
    """Index nodes by direction words (children follow signature order)."""
    out: Dict[Word, RunNode] = {}

    def visit(word: Word, node: RunNode) -> None:
        out[word] = node
        for index, child in enumerate(node.children):
            visit(word + (directions[index],), child)

    visit((), prefix.root)
    return out


def csp_of_run_prefix(prefix: RunPrefix, directions: Sequence[str]) -> Qcsp:
    """The constraint network demanded by all constraints in the prefix.

    Variables are (node word, feature) pairs; chain targets may point past
    the prefix frontier, those variables are still created.  Repeated pairs
    intersect and the result is converse closed.
    """
    builder = QcspBuilder()
    for word, node in _run_nodes_by_word(prefix, directions).items():
        for constraint in sorted(node.constraints, key=SpatialConstraint.sort_key):
            first, second = constraint.args
            var_a: NodeVar = (word + first.path, first.feature)
            var_b: NodeVar = (word + second.path, second.feature)
            builder.add(var_a, var_b, constraint.rel)
    return builder.build()


@dataclass
class PrefixReport:
    """Outcome of validating a run prefix against an automaton and scene."""

    defects: List[str] = field(default_factory=list)
    unchecked: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.defects


def _scene_union(scene: SceneTreePrefix) -> Qcsp:
    builder = QcspBuilder()
    stack = [scene.root]
    while stack:
        node = stack.pop()
        for var in node.scene.variables:
            builder.add_variable(var)
        for (u, v), rel in sorted(node.scene.edges.items()):
            builder.add(u, v, rel)
        for var, rel in sorted(node.scene.selfs.items()):
            builder.add(var, var, rel)
        stack.extend(node.children)
    return builder.build()


def _component_of(network: Qcsp, seeds: Sequence) -> Qcsp:
    """Restrict to the connected component(s) touching the seed variables.

    Consistency is decided per component (unconstrained pairs carry the full
    relation), so this restriction is exact, not an approximation.
    """
    adjacency: Dict = {}
    for (u, v) in network.edges:
        adjacency.setdefault(u, set()).add(v)
    reached = set()
    frontier = [s for s in seeds]
    while frontier:
        var = frontier.pop()
        if var in reached:
            continue
        reached.add(var)
        frontier.extend(adjacency.get(var, ()))
    edges = {
        (u, v): rel for (u, v), rel in network.edges.items() if u in reached
    }
    selfs = {v: rel for v, rel in network.selfs.items() if v in reached}
    return Qcsp(tuple(sorted(reached)), edges, selfs)


def validate_run_prefix(
    automaton: NondetAutomaton, prefix: RunPrefix, scene: SceneTreePrefix
) -> PrefixReport:
    """Check a run prefix locally against transitions, literals, and scene.

    Three families of checks per node: (i) the node's label and successor
    states match one declared transition, (ii) positive literals hold in the
    scene's concept set and negative ones are absent, (iii) every constraint
    whose chain targets both fall inside the prefix is compatible with the
    scene networks.  Constraints reaching past the frontier are reported in
    ``unchecked`` rather than failed.
    """
    report = PrefixReport()
    sig = automaton.sig
    if prefix.k != sig.k or scene.k != sig.k:
        report.defects.append(
            f"shape: prefix arity {prefix.k}/{scene.k} differs from signature {sig.k}"
        )
        return report
    if prefix.depth != scene.depth:
        report.defects.append(
            f"shape: run depth {prefix.depth} differs from scene depth {scene.depth}"
        )
        return report
    if prefix.root.state != automaton.initial:
        report.defects.append(
            f"root: state '{prefix.root.state}' is not the initial state"
        )

    scene_union = _scene_union(scene)
    tightened = QcspBuilder()
    for var in scene_union.variables:
        tightened.add_variable(var)
    for (u, v), rel in scene_union.edges.items():
        tightened.add(u, v, rel)
    for var, rel in scene_union.selfs.items():
        tightened.add(var, var, rel)
    needs_search: List[NodeVar] = []

    def visit(word: Word, run_node: RunNode, scene_node: SceneNode, depth: int) -> None:
        where = "node '" + " ".join(word) + "'"
        expected_children = sig.k if depth < prefix.depth else 0
        if len(run_node.children) != expected_children or len(scene_node.children) != expected_children:
            report.defects.append(f"{where}: not a full tree of depth {prefix.depth}")
            return

        options = automaton.transitions(run_node.state)
        if not options:
            report.defects.append(
                f"{where}: state '{run_node.state}' has no transitions"
            )
        else:
            def matches(t: Transition) -> bool:
                if t.literals != run_node.literals or t.constraints != run_node.constraints:
                    return False
                if expected_children == 0:
                    return True
                return t.succ == tuple(child.state for child in run_node.children)

            if not any(matches(t) for t in options):
                report.defects.append(
                    f"{where}: label does not match any transition of '{run_node.state}'"
                )

        for literal in sorted(run_node.literals, key=fm.encode_generator):
            if isinstance(literal, fm.PosLiteral) and literal.name not in scene_node.concepts:
                report.defects.append(f"{where}: literal {literal.name} not in scene")
            if isinstance(literal, fm.NegLiteral) and literal.name in scene_node.concepts:
                report.defects.append(f"{where}: literal !{literal.name} contradicts scene")

        for constraint in sorted(run_node.constraints, key=SpatialConstraint.sort_key):
            first, second = constraint.args
            if (
                len(word) + len(first.path) > prefix.depth
                or len(word) + len(second.path) > prefix.depth
            ):
                report.unchecked.append(
                    f"{where}: {constraint} unchecked at horizon"
                )
                continue
            var_a: NodeVar = (word + first.path, first.feature)
            var_b: NodeVar = (word + second.path, second.feature)
            if var_a == var_b:
                if "EQ" not in constraint.rel:
                    report.defects.append(
                        f"{where}: {constraint} binds a variable to itself without EQ"
                    )
                continue
            declared = scene_union.relation(var_a, var_b)
            combined = declared & constraint.rel
            if combined.is_empty():
                report.defects.append(
                    f"{where}: {constraint} conflicts with scene relation {declared}"
                )
                continue
            if declared.issubset(constraint.rel):
                continue  # the scene already entails the constraint
            tightened.add(var_a, var_b, combined)
            needs_search.append(var_a)

        for index, child in enumerate(run_node.children):
            visit(
                word + (sig.directions[index],),
                child,
                scene_node.children[index],
                depth + 1,
            )

    visit((), prefix.root, scene.root, 0)

    if needs_search and not report.defects:
        component = _component_of(tightened.build(), needs_search)
        if not is_consistent(component):
            report.defects.append(
                "scene: constraints are jointly inconsistent with the scene networks"
            )
    return report


# ---------------------------------------------------------------------------
# JSON forms (schemas/run_prefix.schema.json, schemas/scene_prefix.schema.json)


def _render_word(word: Word) -> str:
    return " ".join(word)


def _parse_word(text: str) -> Word:
    return tuple(text.split()) if text else ()


def _literal_to_text(literal: Union[fm.PosLiteral, fm.NegLiteral]) -> str:
    return fm.encode_generator(literal)


def _literal_from_text(text: str) -> Union[fm.PosLiteral, fm.NegLiteral]:
    return fm.parse_literal(text)


def _run_node_to_json(node: RunNode) -> Dict:
    return {
        "state": node.state,
        "literals": sorted(_literal_to_text(l) for l in node.literals),
        "constraints": sorted(c.encode() for c in node.constraints),
        "children": [_run_node_to_json(child) for child in node.children],
    }


def run_prefix_to_json(prefix: RunPrefix) -> Dict:
    return {
        "format": "run-prefix",
        "version": 1,
        "k": prefix.k,
        "depth": prefix.depth,
        "root": _run_node_to_json(prefix.root),
    }


def _run_node_from_json(payload: Dict) -> RunNode:
    from .terms import parse_constraint

    return RunNode(
        state=payload["state"],
        literals=frozenset(_literal_from_text(t) for t in payload["literals"]),
        constraints=frozenset(parse_constraint(t) for t in payload["constraints"]),
        children=tuple(_run_node_from_json(c) for c in payload["children"]),
    )


def run_prefix_from_json(payload: Dict) -> RunPrefix:
    if payload.get("format") != "run-prefix":
        raise ValueError("not a run-prefix document")
    return RunPrefix(
        k=payload["k"], depth=payload["depth"], root=_run_node_from_json(payload["root"])
    )


def _var_to_json(var: NodeVar) -> Dict:
    return {"node": _render_word(var[0]), "feature": var[1]}


def _var_from_json(payload: Dict) -> NodeVar:
    return (_parse_word(payload["node"]), payload["feature"])


def _qcsp_to_json(network: Qcsp) -> Dict:
    edges = []
    for (u, v), rel in sorted(network.edges.items()):
        if u <= v:  # one direction suffices, converse closure restores the rest
            edges.append({"a": _var_to_json(u), "b": _var_to_json(v), "rel": str(rel)})
    selfs = [
        {"var": _var_to_json(v), "rel": str(rel)}
        for v, rel in sorted(network.selfs.items())
    ]
    return {"edges": edges, "selfs": selfs}


def _qcsp_from_json(payload: Dict) -> Qcsp:
    builder = QcspBuilder()
    for entry in payload.get("edges", ()):
        builder.add(
            _var_from_json(entry["a"]),
            _var_from_json(entry["b"]),
            parse_relation(entry["rel"]),
        )
    for entry in payload.get("selfs", ()):
        var = _var_from_json(entry["var"])
        builder.add(var, var, parse_relation(entry["rel"]))
    return builder.build()


def _scene_node_to_json(node: SceneNode) -> Dict:
    return {
        "concepts": sorted(node.concepts),
        "scene": _qcsp_to_json(node.scene),
        "children": [_scene_node_to_json(child) for child in node.children],
    }


def scene_prefix_to_json(scene: SceneTreePrefix) -> Dict:
    return {
        "format": "scene-prefix",
        "version": 1,
        "k": scene.k,
        "depth": scene.depth,
        "root": _scene_node_to_json(scene.root),
    }


def _scene_node_from_json(payload: Dict) -> SceneNode:
    return SceneNode(
        concepts=frozenset(payload["concepts"]),
        scene=_qcsp_from_json(payload["scene"]),
        children=tuple(_scene_node_from_json(c) for c in payload["children"]),
    )


def scene_prefix_from_json(payload: Dict) -> SceneTreePrefix:
    if payload.get("format") != "scene-prefix":
        raise ValueError("not a scene-prefix document")
    return SceneTreePrefix(
        k=payload["k"],
        depth=payload["depth"],
        root=_scene_node_from_json(payload["root"]),
    )
