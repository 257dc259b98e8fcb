"""Emptiness decision by doubly depth-first search for a finite tree model.

A nondeterministic automaton accepts some tree iff an accepting run exists
that is regular: determined by finitely many (state, pending-triple-set)
signatures.  Such a run is represented by a finite tree whose leaves point
back at matching internal nodes.  The search below builds that tree depth
first, trying transitions in declared order and directions in signature
order, and closes the construction with one consistency check of the global
constraint network collected over the internal nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from . import formula as fm
from .automata import (
    Metrics,
    NondetAutomaton,
    RunNode,
    RunPrefix,
    SceneNode,
    SceneTreePrefix,
    metrics as compute_metrics,
    validate_run_prefix,
)
from .errors import MalformedModelError, ResourceLimitError
from .relalg import EQ_RELATION, Qcsp, QcspBuilder, consistent_scenario, is_consistent
from .terms import ChainTerm, SpatialConstraint, parse_chain, parse_constraint

__all__ = [
    "WordOrder",
    "PtpTriple",
    "FtmNode",
    "FiniteTreeModel",
    "SearchStats",
    "BoundsReport",
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
]

Word = Tuple[str, ...]

DEFAULT_MAX_UNFOLD_NODES = 200_000


class WordOrder:
    """Prefix and lexicographic order on node words for a fixed direction
    order d_1 < ... < d_k (the declaration order, not alphabetical)."""

    def __init__(self, directions: Sequence[str]):
        self.directions = tuple(directions)
        self._rank = {d: i for i, d in enumerate(self.directions)}

    def key(self, word: Word) -> Tuple[int, ...]:
        return tuple(self._rank[d] for d in word)

    def lex_lt(self, left: Word, right: Word) -> bool:
        return self.key(left) < self.key(right)

    def lex_le(self, left: Word, right: Word) -> bool:
        return self.key(left) <= self.key(right)

    @staticmethod
    def is_prefix(left: Word, right: Word) -> bool:
        return len(left) <= len(right) and right[: len(left)] == left

    @staticmethod
    def is_strict_prefix(left: Word, right: Word) -> bool:
        return len(left) < len(right) and right[: len(left)] == left

    def is_rightmost(self, word: Word) -> bool:
        """Whether the word lies on the rightmost spine (all last direction)."""
        if not self.directions:
            return True
        last = self.directions[-1]
        return all(d == last for d in word)


@dataclass(frozen=True)
class PtpTriple:
    """A pending constraint target: a constraint issued at some ancestor,
    the argument it still targets, and the chain left to walk.

    Identity is syntactic; the issuing node is recoverable from the word of
    the node holding the triple (see ``origin_of``), so equal-looking
    triples from different ancestors coincide on purpose.  That is what
    lets distant subtrees share one signature.
    """

    constraint: SpatialConstraint
    arg_index: int
    remaining: ChainTerm

    def __post_init__(self) -> None:
        if self.arg_index not in (1, 2):
            raise ValueError("argument index must be 1 or 2")
        arg = self.constraint.args[self.arg_index - 1]
        tail = self.remaining.path
        if (
            self.remaining.feature != arg.feature
            or len(tail) >= len(arg.path)
            or arg.path[len(arg.path) - len(tail) :] != tail
        ):
            raise ValueError("remaining chain is not a strict suffix of the argument")

    def sort_key(self) -> Tuple[str, int, str]:
        return (self.constraint.encode(), self.arg_index, self.remaining.encode())

    def origin_of(self, word: Word) -> Word:
        """The word of the node that issued this constraint, given the word
        of a node whose triple set contains the triple."""
        arg = self.constraint.args[self.arg_index - 1]
        consumed = len(arg.path) - len(self.remaining.path)
        return word[: len(word) - consumed]


def backconstraints_step(parent, direction: str) -> FrozenSet[PtpTriple]:
    """Pending triples a child in ``direction`` inherits from ``parent``.

    ``parent`` is any node object carrying ``constraints`` and ``ptpge``.
    Constraints issued at the parent whose argument chain starts with the
    direction contribute a fresh triple; pending triples whose remaining
    chain starts with the direction advance by one step.  Triples already
    reduced to a bare feature target the parent itself and die here.
    """
    out = set()
    for constraint in parent.constraints:
        for arg_index, term in enumerate(constraint.args, start=1):
            if term.path and term.path[0] == direction:
                out.add(
                    PtpTriple(
                        constraint, arg_index, ChainTerm(term.path[1:], term.feature)
                    )
                )
    for triple in parent.ptpge:
        tail = triple.remaining.path
        if tail and tail[0] == direction:
            out.add(
                PtpTriple(
                    triple.constraint,
                    triple.arg_index,
                    ChainTerm(tail[1:], triple.remaining.feature),
                )
            )
    return frozenset(out)


@dataclass(frozen=True)
class FtmNode:
    """One node of a finite tree model; leaves carry a backnode word."""

    word: Word
    state: str
    literals: FrozenSet
    constraints: FrozenSet[SpatialConstraint]
    children: Tuple[Word, ...]
    backnode: Optional[Word]
    ptpge: FrozenSet[PtpTriple]

    @property
    def is_leaf(self) -> bool:
        return self.backnode is not None


@dataclass(frozen=True)
class FiniteTreeModel:
    """Finite witness tree; ``nodes`` is keyed by word in preorder."""

    directions: Tuple[str, ...]
    nodes: Mapping[Word, FtmNode]

    @property
    def root(self) -> FtmNode:
        return self.nodes[()]

    @property
    def height(self) -> int:
        return max(len(word) for word in self.nodes)

    def internal_words(self) -> List[Word]:
        return [w for w, n in self.nodes.items() if not n.is_leaf]

    def leaf_words(self) -> List[Word]:
        return [w for w, n in self.nodes.items() if n.is_leaf]


@dataclass
class SearchStats:
    nodes_created: int = 0
    peak_nodes: int = 0
    csp_checks: int = 0
    bound_exceeded: bool = False


class _SearchNode:
    __slots__ = (
        "word",
        "state",
        "ptpge",
        "literals",
        "constraints",
        "children",
        "backnode",
        "serial",
        "choice",
    )

    def __init__(self, word: Word, state: str, ptpge: FrozenSet[PtpTriple], k: int):
        self.word = word
        self.state = state
        self.ptpge = ptpge
        self.literals: Optional[FrozenSet] = None
        self.constraints: Optional[FrozenSet[SpatialConstraint]] = None
        self.children: List[Optional[_SearchNode]] = [None] * k
        self.backnode: Optional[Word] = None
        self.serial = 0
        self.choice = 0


def _witness_bound(size_q: int, met: Metrics, k: int) -> Tuple[int, int]:
    """(internal, leaf) node bounds; zero factors are clamped to one so
    constraint-free automata keep positive bounds."""
    base = (
        size_q
        * max(met.constraint_count, 1)
        * max(met.chain_length, 1)
        * met.arity
    )
    return base, base * k


def ftm_search(
    automaton: NondetAutomaton, *, max_nodes: Optional[int] = None
) -> Tuple[Optional[FiniteTreeModel], SearchStats]:
    """Search for a finite tree model; returns (model, stats) or (None, stats).

    Deterministic realization of the backtracking construction: transitions
    are tried in declared order, directions in signature order, so node
    creation is in preorder, which coincides with lexicographic order.  A
    new node whose (state, pending triples) signature matches an existing
    internal node is closed as a leaf pointing back at it, except when the
    match is a strict ancestor and the ancestor chain down to the new node
    contains no accepting state: pumping such a loop could never satisfy
    acceptance, so the configuration is rejected.  When a node on the
    rightmost spine completes, the global constraint network is checked
    once; inconsistency also rejects the configuration.

    Rejections backtrack chronologically: the most recently chosen
    transition anywhere in the tree advances to its next alternative and
    every node created after that decision is discarded.  Sibling subtrees
    built earlier under the same parent are therefore revisited before the
    parent abandons its own choice; the verdict does not depend on the
    order transitions are declared in.

    ``max_nodes`` caps the live tree size; the default is twice the
    theoretical witness bound.
    """
    sig = automaton.sig
    k = sig.k
    order = WordOrder(sig.directions)
    accepting = automaton.accepting
    met = compute_metrics(automaton)
    internal_bound, leaf_bound = _witness_bound(len(automaton.states), met, k)
    exact_total = internal_bound + leaf_bound
    limit = max_nodes if max_nodes is not None else 2 * exact_total

    stats = SearchStats()
    index: Dict[Word, _SearchNode] = {}
    by_signature: Dict[Tuple[str, FrozenSet[PtpTriple]], Word] = {}
    created: List[_SearchNode] = []
    decisions: List[_SearchNode] = []
    slot = {d: i for i, d in enumerate(sig.directions)}
    csp_ok = False
    serial = 0

    def register(node: _SearchNode) -> None:
        nonlocal serial
        if len(index) >= limit:
            raise ResourceLimitError(
                f"search tree exceeded {limit} nodes "
                f"(witness bound {exact_total}; raise max_nodes to override)"
            )
        node.serial = serial
        serial += 1
        index[node.word] = node
        created.append(node)
        stats.nodes_created += 1
        stats.peak_nodes = max(stats.peak_nodes, len(index))
        if len(index) > exact_total:
            stats.bound_exceeded = True

    def drop_after(anchor: _SearchNode) -> None:
        """Remove every node registered after anchor, newest first, so each
        dropped node's parent is still present when its slot is cleared."""
        while created and created[-1].serial > anchor.serial:
            node = created.pop()
            del index[node.word]
            if node.backnode is None:
                del by_signature[(node.state, node.ptpge)]
            index[node.word[:-1]].children[slot[node.word[-1]]] = None
        while decisions and decisions[-1].serial > anchor.serial:
            decisions.pop()

    def apply_choice(node: _SearchNode) -> bool:
        choices = automaton.transitions(node.state)
        if node.choice >= len(choices):
            return False
        picked = choices[node.choice]
        node.literals = picked.literals
        node.constraints = picked.constraints
        return True

    # frames mirror the active ancestor chain; frames[-1] is the node whose
    # child in direction slot j is built next.
    frames: List[List] = []

    def retract() -> bool:
        """Advance the most recent transition decision still open anywhere
        in the tree; False when the whole space is exhausted."""
        while decisions:
            node = decisions[-1]
            node.choice += 1
            if apply_choice(node):
                drop_after(node)
                del frames[:]
                for depth, component in enumerate(node.word):
                    frames.append([index[node.word[:depth]], slot[component]])
                frames.append([node, 0])
                return True
            decisions.pop()
        return False

    def loop_is_rejecting(anchor: Word, word: Word, state: str) -> bool:
        """True when anchor is a strict ancestor and no node on the chain
        anchor..word (inclusive) carries an accepting state."""
        if state in accepting:
            return False
        for cut in range(len(anchor), len(word)):
            if index[word[:cut]].state in accepting:
                return False
        return True

    root = _SearchNode((), automaton.initial, frozenset(), k)
    register(root)
    by_signature[(root.state, root.ptpge)] = ()
    decisions.append(root)
    if not apply_choice(root):
        return None, stats
    frames.append([root, 0])

    while frames:
        node, j = frames[-1]
        if j == k:
            if order.is_rightmost(node.word) and not csp_ok:
                stats.csp_checks += 1
                if is_consistent(globalcsp(_freeze(sig.directions, index))):
                    csp_ok = True
                elif retract():
                    continue
                else:
                    return None, stats
            frames.pop()
            if frames:
                frames[-1][1] += 1
            continue
        choice = automaton.transitions(node.state)[node.choice]
        direction = sig.directions[j]
        word = node.word + (direction,)
        state = choice.succ[j]
        ptpge = backconstraints_step(node, direction)
        match = by_signature.get((state, ptpge))
        if match is not None:
            assert order.lex_lt(match, word)
            if order.is_strict_prefix(match, word) and loop_is_rejecting(
                match, word, state
            ):
                if retract():
                    continue
                return None, stats
            leaf = _SearchNode(word, state, ptpge, k)
            leaf.backnode = match
            register(leaf)
            node.children[j] = leaf
            frames[-1][1] += 1
            continue
        child = _SearchNode(word, state, ptpge, k)
        register(child)
        by_signature[(state, ptpge)] = word
        node.children[j] = child
        decisions.append(child)
        if apply_choice(child):
            frames.append([child, 0])
        elif not retract():
            return None, stats

    return _freeze(sig.directions, index), stats


def _freeze(directions: Tuple[str, ...], index: Mapping[Word, _SearchNode]) -> FiniteTreeModel:
    nodes: Dict[Word, FtmNode] = {}
    for word, node in index.items():
        internal = node.backnode is None
        nodes[word] = FtmNode(
            word=word,
            state=node.state,
            literals=frozenset(node.literals or ()),
            constraints=frozenset(node.constraints or ()),
            children=tuple(word + (d,) for d in directions) if internal else (),
            backnode=node.backnode,
            ptpge=node.ptpge,
        )
    return FiniteTreeModel(directions=directions, nodes=nodes)


def resolve_variable(model: FiniteTreeModel, word: Word, chain: ChainTerm) -> Tuple[Word, str]:
    """Walk a feature chain from a node, routing through backnodes, down to
    the internal node whose feature the chain names.

    Raises MalformedModel on dangling words or backnode cycles, which only
    corrupted input files can produce.
    """
    path = chain.path
    fuel = 2 * chain.length + 2
    while True:
        if fuel == 0:
            raise MalformedModelError("variable resolution does not terminate")
        fuel -= 1
        node = model.nodes.get(word)
        if node is None:
            raise MalformedModelError(f"missing node '{' '.join(word)}'")
        if node.backnode is not None:
            word = node.backnode
            continue
        if not path:
            return (word, chain.feature)
        word = word + (path[0],)
        path = path[1:]


def globalcsp(model: FiniteTreeModel) -> Qcsp:
    """The union, over internal nodes in preorder, of each node's
    constraints with arguments resolved to (internal node, feature)
    variables; repeated pairs intersect and the result is converse closed."""
    builder = QcspBuilder()
    for word in model.internal_words():
        node = model.nodes[word]
        for constraint in sorted(node.constraints, key=SpatialConstraint.sort_key):
            first = resolve_variable(model, word, constraint.args[0])
            second = resolve_variable(model, word, constraint.args[1])
            builder.add(first, second, constraint.rel)
    return builder.build()


# ---------------------------------------------------------------------------
# Unfolding and witness post-checks


def unfold_with_sources(
    model: FiniteTreeModel, depth: int
) -> Tuple[RunPrefix, Dict[Word, Word]]:
    """Unfold to the given depth, also returning, per prefix word, the
    internal model node it copies."""
    directions = model.directions
    sources: Dict[Word, Word] = {}

    def build(prefix_word: Word, model_word: Word, remaining: int) -> RunNode:
        node = model.nodes[model_word]
        while node.backnode is not None:
            model_word = node.backnode
            node = model.nodes[model_word]
        sources[prefix_word] = model_word
        children: Tuple[RunNode, ...] = ()
        if remaining > 0:
            children = tuple(
                build(prefix_word + (d,), model_word + (d,), remaining - 1)
                for d in directions
            )
        return RunNode(
            state=node.state,
            literals=node.literals,
            constraints=node.constraints,
            children=children,
        )

    root = build((), (), depth)
    return RunPrefix(k=len(directions), depth=depth, root=root), sources


def unfold(model: FiniteTreeModel, depth: int) -> RunPrefix:
    """The depth-D truncation of the regular run the model folds up:
    every leaf copy continues with the subtree at its backnode."""
    return unfold_with_sources(model, depth)[0]


def scene_from_witness(
    model: FiniteTreeModel,
    prefix: RunPrefix,
    sources: Mapping[Word, Word],
) -> SceneTreePrefix:
    """A scene prefix compatible with the unfolded run: concepts are the
    positive literals, and every constraint queried inside the prefix gets
    the atomic relation a consistent completion of the global network
    assigns to its resolved variable pair (EQ when both ends resolve to the
    same variable)."""
    directions = model.directions
    network = globalcsp(model)
    scenario = consistent_scenario(network)
    if scenario is None:
        raise MalformedModelError("global constraint network is inconsistent")

    builder = QcspBuilder()

    def collect(word: Word, node: RunNode) -> None:
        for constraint in sorted(node.constraints, key=SpatialConstraint.sort_key):
            first, second = constraint.args
            word_a = word + first.path
            word_b = word + second.path
            if len(word_a) > prefix.depth or len(word_b) > prefix.depth:
                continue
            var_a = (word_a, first.feature)
            var_b = (word_b, second.feature)
            if var_a == var_b:
                continue
            image_a = (sources[word_a], first.feature)
            image_b = (sources[word_b], second.feature)
            if image_a == image_b:
                builder.add(var_a, var_b, EQ_RELATION)
            else:
                builder.add(var_a, var_b, scenario.relation(image_a, image_b))
        for i, child in enumerate(node.children):
            collect(word + (directions[i],), child)

    collect((), prefix.root)
    root_scene = builder.build()
    empty_scene = QcspBuilder().build()

    def mirror(node: RunNode, at_root: bool) -> SceneNode:
        concepts = frozenset(
            literal.name for literal in node.literals if isinstance(literal, fm.PosLiteral)
        )
        return SceneNode(
            concepts=concepts,
            scene=root_scene if at_root else empty_scene,
            children=tuple(mirror(child, False) for child in node.children),
        )

    return SceneTreePrefix(k=prefix.k, depth=prefix.depth, root=mirror(prefix.root, True))


@dataclass
class BoundsReport:
    internal_count: int
    leaf_count: int
    internal_bound: int
    leaf_bound: int
    clamped: bool
    duplicate_signatures: List[Tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            self.internal_count <= self.internal_bound
            and self.leaf_count <= self.leaf_bound
            and not self.duplicate_signatures
        )


def check_bounds(model: FiniteTreeModel, met: Metrics, size_q: int) -> BoundsReport:
    """Compare node counts against the witness bounds and list any internal
    nodes that wrongly share a (state, pending triples) signature."""
    internal_bound, leaf_bound = _witness_bound(size_q, met, len(model.directions))
    internal = model.internal_words()
    leaves = model.leaf_words()
    seen: Dict[Tuple[str, FrozenSet[PtpTriple]], Word] = {}
    duplicates: List[Tuple[str, str]] = []
    for word in internal:
        node = model.nodes[word]
        signature = (node.state, node.ptpge)
        if signature in seen:
            duplicates.append((" ".join(seen[signature]), " ".join(word)))
        else:
            seen[signature] = word
    return BoundsReport(
        internal_count=len(internal),
        leaf_count=len(leaves),
        internal_bound=internal_bound,
        leaf_bound=leaf_bound,
        clamped=met.constraint_count < 1 or met.chain_length < 1,
        duplicate_signatures=duplicates,
    )


def check_witness(automaton: NondetAutomaton, model: FiniteTreeModel) -> List[str]:
    """Structural defects of a claimed witness for the given automaton."""
    defects: List[str] = []
    sig = automaton.sig
    order = WordOrder(sig.directions)
    if tuple(model.directions) != sig.directions:
        defects.append("witness directions differ from the automaton signature")
        return defects
    if () not in model.nodes:
        defects.append("witness has no root")
        return defects

    root = model.nodes[()]
    if root.state != automaton.initial:
        defects.append(f"root state '{root.state}' is not the initial state")
    if root.is_leaf:
        defects.append("root is a leaf")
        return defects
    if root.ptpge:
        defects.append("root has pending triples")

    for word, node in model.nodes.items():
        label = "node '" + " ".join(word) + "'"
        if node.word != word:
            defects.append(f"{label}: stored word disagrees with its key")
        if word:
            parent = model.nodes.get(word[:-1])
            if parent is None or parent.is_leaf:
                defects.append(f"{label}: parent is missing or a leaf")
                continue
        if node.is_leaf:
            if node.children:
                defects.append(f"{label}: leaf with children")
            target = model.nodes.get(node.backnode)
            if target is None:
                defects.append(f"{label}: dangling backnode")
                continue
            if target.is_leaf:
                defects.append(f"{label}: backnode is not internal")
                continue
            if not order.lex_lt(node.backnode, word):
                defects.append(f"{label}: backnode is not lexicographically smaller")
            if target.state != node.state or target.ptpge != node.ptpge:
                defects.append(f"{label}: backnode signature differs")
            if WordOrder.is_strict_prefix(node.backnode, word):
                chain_states = [
                    model.nodes[word[:cut]].state
                    for cut in range(len(node.backnode), len(word))
                ] + [node.state]
                if not any(s in automaton.accepting for s in chain_states):
                    defects.append(
                        f"{label}: ancestor loop without an accepting state"
                    )
        else:
            expected = tuple(word + (d,) for d in sig.directions)
            if node.children != expected:
                defects.append(f"{label}: internal node without its {sig.k} children")
                continue
            for child_word in expected:
                if child_word not in model.nodes:
                    defects.append(f"{label}: missing child '{' '.join(child_word)}'")
            options = automaton.transitions(node.state)
            matched = False
            for t in options:
                if (
                    t.literals == node.literals
                    and t.constraints == node.constraints
                    and t.succ
                    == tuple(
                        model.nodes[c].state for c in expected if c in model.nodes
                    )
                ):
                    matched = True
                    break
            if not matched:
                defects.append(
                    f"{label}: label does not match any transition of '{node.state}'"
                )
            for child_word, direction in zip(expected, sig.directions):
                child = model.nodes.get(child_word)
                if child is not None and child.ptpge != backconstraints_step(
                    node, direction
                ):
                    defects.append(
                        f"node '{' '.join(child_word)}': stored pending triples "
                        "disagree with recomputation"
                    )

    if not defects and not is_consistent(globalcsp(model)):
        defects.append("global constraint network is inconsistent")
    return defects


@dataclass
class Decision:
    """Outcome of ``decide``: the verdict plus witness-side reports."""

    nonempty: bool
    witness: Optional[FiniteTreeModel] = None
    bounds: Optional[BoundsReport] = None
    prefix_defects: List[str] = field(default_factory=list)
    diagnostics: List[str] = field(default_factory=list)
    stats: Optional[SearchStats] = None
    unfold_depth: int = 0

    @property
    def verdict(self) -> str:
        return "not-empty" if self.nonempty else "empty"


def _prefix_size(k: int, depth: int) -> int:
    if k == 1:
        return depth + 1
    return (k ** (depth + 1) - 1) // (k - 1)


def decide(
    automaton: NondetAutomaton,
    *,
    max_nodes: Optional[int] = None,
    unfold_depth: Optional[int] = None,
    max_unfold_nodes: int = DEFAULT_MAX_UNFOLD_NODES,
) -> Decision:
    """Decide emptiness; a NonEmpty decision carries the witness together
    with bound and unfold-validation reports.

    The witness is unfolded to ``unfold_depth`` (default three times its
    height, reduced if the full prefix would exceed ``max_unfold_nodes``
    nodes) and validated against a scene built from a consistent completion
    of its global constraint network.
    """
    model, stats = ftm_search(automaton, max_nodes=max_nodes)
    if stats.bound_exceeded:
        note = "search tree grew past the theoretical witness bound"
        diagnostics = [note]
    else:
        diagnostics = []
    if model is None:
        return Decision(nonempty=False, diagnostics=diagnostics, stats=stats)

    met = compute_metrics(automaton)
    bounds = check_bounds(model, met, len(automaton.states))
    if not bounds.ok:
        diagnostics.append("witness exceeds node bounds or repeats a signature")

    depth = unfold_depth if unfold_depth is not None else 3 * model.height
    k = len(model.directions)
    while depth > 1 and _prefix_size(k, depth) > max_unfold_nodes:
        depth -= 1
    if unfold_depth is None and depth != 3 * model.height:
        diagnostics.append(
            f"unfold depth reduced to {depth} to respect max_unfold_nodes"
        )

    prefix, sources = unfold_with_sources(model, depth)
    scene = scene_from_witness(model, prefix, sources)
    report = validate_run_prefix(automaton, prefix, scene)
    if report.defects:
        diagnostics.append("unfolded prefix failed validation")
    return Decision(
        nonempty=True,
        witness=model,
        bounds=bounds,
        prefix_defects=list(report.defects),
        diagnostics=diagnostics,
        stats=stats,
        unfold_depth=depth,
    )


# ---------------------------------------------------------------------------
# Witness serialization (schemas/witness.schema.json) and DOT rendering


def _word_key(word: Word) -> str:
    return " ".join(word)


def _parse_word_key(text: str) -> Word:
    return tuple(text.split()) if text else ()


def _triple_to_json(triple: PtpTriple, word: Word) -> Dict:
    return {
        "constraint": triple.constraint.encode(),
        "argIndex": triple.arg_index,
        "remainingChain": triple.remaining.encode(),
        "origin": _word_key(triple.origin_of(word)),
    }


def witness_to_json(model: FiniteTreeModel) -> Dict:
    nodes: Dict[str, Dict] = {}
    for word, node in model.nodes.items():
        nodes[_word_key(word)] = {
            "state": node.state,
            "literals": sorted(fm.encode_generator(l) for l in node.literals),
            "constraints": sorted(c.encode() for c in node.constraints),
            "children": [_word_key(c) for c in node.children],
            "backnode": None if node.backnode is None else _word_key(node.backnode),
            "ptpge": [
                _triple_to_json(t, word)
                for t in sorted(node.ptpge, key=PtpTriple.sort_key)
            ],
        }
    return {
        "format": "finite-tree-model",
        "version": 1,
        "directions": list(model.directions),
        "height": model.height,
        "nodes": nodes,
    }


def witness_from_json(payload: Dict) -> FiniteTreeModel:
    if payload.get("format") != "finite-tree-model":
        raise MalformedModelError("not a finite-tree-model document")
    try:
        directions = tuple(payload["directions"])
        order = WordOrder(directions)
        entries = []
        for key, raw in payload["nodes"].items():
            word = _parse_word_key(key)
            entries.append((order.key(word), word, raw))
        entries.sort(key=lambda e: e[0])
        nodes: Dict[Word, FtmNode] = {}
        for _, word, raw in entries:
            backnode = raw["backnode"]
            nodes[word] = FtmNode(
                word=word,
                state=raw["state"],
                literals=frozenset(fm.parse_literal(t) for t in raw["literals"]),
                constraints=frozenset(parse_constraint(t) for t in raw["constraints"]),
                children=tuple(_parse_word_key(c) for c in raw["children"]),
                backnode=None if backnode is None else _parse_word_key(backnode),
                ptpge=frozenset(
                    PtpTriple(
                        parse_constraint(t["constraint"]),
                        t["argIndex"],
                        parse_chain(t["remainingChain"]),
                    )
                    for t in raw["ptpge"]
                ),
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedModelError(f"malformed witness document: {exc}") from exc
    return FiniteTreeModel(directions=directions, nodes=nodes)


def _dot_id(word: Word) -> str:
    return "ε" if not word else _word_key(word)


def witness_to_dot(model: FiniteTreeModel) -> str:
    lines = ["digraph finite_tree_model {", "  rankdir=TB;"]
    for word, node in model.nodes.items():
        style = "dashed" if node.is_leaf else "solid"
        label = f"{_dot_id(word)}\\n{node.state}"
        lines.append(f'  "{_dot_id(word)}" [label="{label}", shape=box, style={style}];')
    for word, node in model.nodes.items():
        for child, direction in zip(node.children, model.directions):
            lines.append(f'  "{_dot_id(word)}" -> "{_dot_id(child)}" [label="{direction}"];')
    for word in model.leaf_words():
        node = model.nodes[word]
        lines.append(
            f'  "{_dot_id(word)}" -> "{_dot_id(node.backnode)}" '
            "[style=dotted, constraint=false];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
