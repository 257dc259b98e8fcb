"""RCC8 relation algebra and qualitative constraint networks.

The eight atoms (DC, EC, PO, TPP, NTPP, TPPI, NTPPI, EQ) are jointly
exhaustive and pairwise disjoint, so a relation is just a set of atoms and
is stored as an 8-bit mask.  Converse and composition are table driven; the
composition table is the standard published one for RCC8 (weak composition).

A ``Qcsp`` holds one relation per ordered pair of variables, kept converse
closed, with missing pairs meaning the full relation.  Constraints between a
variable and itself cannot be stored pairwise, so they are kept in a separate
``selfs`` map: a self constraint is satisfiable exactly when it admits EQ.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, Mapping, Optional, Tuple

__all__ = [
    "ATOMS",
    "Relation",
    "Qcsp",
    "QcspBuilder",
    "converse",
    "compose",
    "path_consistency",
    "is_consistent",
    "consistent_scenario",
    "parse_relation",
]

ATOMS: Tuple[str, ...] = ("DC", "EC", "PO", "TPP", "NTPP", "TPPI", "NTPPI", "EQ")

_ATOM_BIT: Dict[str, int] = {name: 1 << i for i, name in enumerate(ATOMS)}
_FULL_MASK = (1 << len(ATOMS)) - 1

_CONVERSE_ATOM = {
    "DC": "DC",
    "EC": "EC",
    "PO": "PO",
    "TPP": "TPPI",
    "NTPP": "NTPPI",
    "TPPI": "TPP",
    "NTPPI": "NTPP",
    "EQ": "EQ",
}

# Weak composition of base relations: row atom first, column atom second.
_ALL = ATOMS
_COMPOSITION_ATOMS: Dict[str, Dict[str, Tuple[str, ...]]] = {
    "DC": {
        "DC": _ALL,
        "EC": ("DC", "EC", "PO", "TPP", "NTPP"),
        "PO": ("DC", "EC", "PO", "TPP", "NTPP"),
        "TPP": ("DC", "EC", "PO", "TPP", "NTPP"),
        "NTPP": ("DC", "EC", "PO", "TPP", "NTPP"),
        "TPPI": ("DC",),
        "NTPPI": ("DC",),
        "EQ": ("DC",),
    },
    "EC": {
        "DC": ("DC", "EC", "PO", "TPPI", "NTPPI"),
        "EC": ("DC", "EC", "PO", "TPP", "TPPI", "EQ"),
        "PO": ("DC", "EC", "PO", "TPP", "NTPP"),
        "TPP": ("EC", "PO", "TPP", "NTPP"),
        "NTPP": ("PO", "TPP", "NTPP"),
        "TPPI": ("DC", "EC"),
        "NTPPI": ("DC",),
        "EQ": ("EC",),
    },
    "PO": {
        "DC": ("DC", "EC", "PO", "TPPI", "NTPPI"),
        "EC": ("DC", "EC", "PO", "TPPI", "NTPPI"),
        "PO": _ALL,
        "TPP": ("PO", "TPP", "NTPP"),
        "NTPP": ("PO", "TPP", "NTPP"),
        "TPPI": ("DC", "EC", "PO", "TPPI", "NTPPI"),
        "NTPPI": ("DC", "EC", "PO", "TPPI", "NTPPI"),
        "EQ": ("PO",),
    },
    "TPP": {
        "DC": ("DC",),
        "EC": ("DC", "EC"),
        "PO": ("DC", "EC", "PO", "TPP", "NTPP"),
        "TPP": ("TPP", "NTPP"),
        "NTPP": ("NTPP",),
        "TPPI": ("DC", "EC", "PO", "TPP", "TPPI", "EQ"),
        "NTPPI": ("DC", "EC", "PO", "TPPI", "NTPPI"),
        "EQ": ("TPP",),
    },
    "NTPP": {
        "DC": ("DC",),
        "EC": ("DC",),
        "PO": ("DC", "EC", "PO", "TPP", "NTPP"),
        "TPP": ("NTPP",),
        "NTPP": ("NTPP",),
        "TPPI": ("DC", "EC", "PO", "TPP", "NTPP"),
        "NTPPI": _ALL,
        "EQ": ("NTPP",),
    },
    "TPPI": {
        "DC": ("DC", "EC", "PO", "TPPI", "NTPPI"),
        "EC": ("EC", "PO", "TPPI", "NTPPI"),
        "PO": ("PO", "TPPI", "NTPPI"),
        "TPP": ("PO", "TPP", "TPPI", "EQ"),
        "NTPP": ("PO", "TPP", "NTPP"),
        "TPPI": ("TPPI", "NTPPI"),
        "NTPPI": ("NTPPI",),
        "EQ": ("TPPI",),
    },
    "NTPPI": {
        "DC": ("DC", "EC", "PO", "TPPI", "NTPPI"),
        "EC": ("PO", "TPPI", "NTPPI"),
        "PO": ("PO", "TPPI", "NTPPI"),
        "TPP": ("PO", "TPPI", "NTPPI"),
        "NTPP": ("PO", "TPP", "NTPP", "TPPI", "NTPPI", "EQ"),
        "TPPI": ("NTPPI",),
        "NTPPI": ("NTPPI",),
        "EQ": ("NTPPI",),
    },
    "EQ": {atom: (atom,) for atom in ATOMS},
}


def _mask_of(atoms: Iterable[str]) -> int:
    mask = 0
    for name in atoms:
        mask |= _ATOM_BIT[name]
    return mask


# Converse and composition, precomputed per atom as masks.
_CONVERSE_BY_BIT: Dict[int, int] = {
    _ATOM_BIT[a]: _ATOM_BIT[_CONVERSE_ATOM[a]] for a in ATOMS
}
_COMPOSE_MASK: Dict[Tuple[int, int], int] = {
    (_ATOM_BIT[a], _ATOM_BIT[b]): _mask_of(_COMPOSITION_ATOMS[a][b])
    for a in ATOMS
    for b in ATOMS
}


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low
        mask ^= low


@dataclass(frozen=True, order=True)
class Relation:
    """A subset of the eight RCC8 atoms."""

    mask: int

    def __post_init__(self) -> None:
        if not 0 <= self.mask <= _FULL_MASK:
            raise ValueError(f"invalid relation mask {self.mask!r}")

    @staticmethod
    def of(*atoms: str) -> "Relation":
        return Relation(_mask_of(_canon_atom(a) for a in atoms))

    @staticmethod
    def full() -> "Relation":
        return Relation(_FULL_MASK)

    @staticmethod
    def empty() -> "Relation":
        return Relation(0)

    @property
    def atoms(self) -> Tuple[str, ...]:
        return tuple(a for a in ATOMS if _ATOM_BIT[a] & self.mask)

    def is_empty(self) -> bool:
        return self.mask == 0

    def is_full(self) -> bool:
        return self.mask == _FULL_MASK

    def is_atomic(self) -> bool:
        return self.mask != 0 and self.mask & (self.mask - 1) == 0

    def __contains__(self, atom: str) -> bool:
        return bool(_ATOM_BIT[_canon_atom(atom)] & self.mask)

    def __and__(self, other: "Relation") -> "Relation":
        return Relation(self.mask & other.mask)

    def __or__(self, other: "Relation") -> "Relation":
        return Relation(self.mask | other.mask)

    def complement(self) -> "Relation":
        return Relation(self.mask ^ _FULL_MASK)

    def issubset(self, other: "Relation") -> bool:
        return self.mask & ~other.mask == 0

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __iter__(self) -> Iterator[str]:
        return iter(self.atoms)

    def __str__(self) -> str:
        names = self.atoms
        if len(names) == 1:
            return names[0]
        return "{" + ",".join(names) + "}"

    def __repr__(self) -> str:
        return f"Relation.of({', '.join(map(repr, self.atoms))})"


def _canon_atom(name: str) -> str:
    upper = name.upper()
    if upper not in _ATOM_BIT:
        raise ValueError(f"unknown RCC8 atom {name!r}")
    return upper


EQ_RELATION = Relation.of("EQ")


def parse_relation(text: str) -> Relation:
    """Parse ``TPP`` or ``{TPP,NTPP}`` (atom names case insensitive)."""
    text = text.strip()
    if text.startswith("{"):
        if not text.endswith("}"):
            raise ValueError(f"unterminated relation set {text!r}")
        inner = text[1:-1].strip()
        if not inner:
            raise ValueError("relation set must name at least one atom")
        return Relation.of(*(part.strip() for part in inner.split(",")))
    return Relation.of(text)


def converse(rel: Relation) -> Relation:
    mask = 0
    for bit in _bits(rel.mask):
        mask |= _CONVERSE_BY_BIT[bit]
    return Relation(mask)


def compose(first: Relation, second: Relation) -> Relation:
    """Weak composition: the union of table entries over all atom pairs."""
    mask = 0
    for a in _bits(first.mask):
        for b in _bits(second.mask):
            mask |= _COMPOSE_MASK[(a, b)]
            if mask == _FULL_MASK:
                return Relation(_FULL_MASK)
    return Relation(mask)


Variable = Tuple  # any hashable, totally ordered identifier


@dataclass(frozen=True)
class Qcsp:
    """A qualitative constraint network over RCC8.

    ``edges`` maps ordered pairs of distinct variables to relations and is
    converse closed; pairs that are absent carry the full relation.  ``selfs``
    holds the intersection of all constraints declared between a variable and
    itself.
    """

    variables: Tuple[Variable, ...]
    edges: Mapping[Tuple[Variable, Variable], Relation]
    selfs: Mapping[Variable, Relation] = field(default_factory=dict)

    def relation(self, u: Variable, v: Variable) -> Relation:
        if u == v:
            raise ValueError("use self_relation() for a variable against itself")
        return self.edges.get((u, v), Relation.full())

    def self_relation(self, v: Variable) -> Relation:
        return self.selfs.get(v, Relation.full())

    def constrained_pairs(self) -> Tuple[Tuple[Variable, Variable], ...]:
        return tuple(sorted(self.edges))

    def refines(self, other: "Qcsp") -> bool:
        """True when every edge of self is contained in other's edge."""
        for pair, rel in self.edges.items():
            if not rel.issubset(other.edges.get(pair, Relation.full())):
                return False
        for var, rel in self.selfs.items():
            if not rel.issubset(other.selfs.get(var, Relation.full())):
                return False
        return True

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Qcsp):
            return NotImplemented
        return (
            set(self.variables) == set(other.variables)
            and dict(self.edges) == dict(other.edges)
            and dict(self.selfs) == dict(other.selfs)
        )

    def __hash__(self) -> int:  # pragma: no cover - not used as dict key
        return hash((frozenset(self.variables), frozenset(self.edges.items())))


class QcspBuilder:
    """Accumulates constraints, intersecting repeats and closing converses."""

    def __init__(self, variables: Iterable[Variable] = ()) -> None:
        self._variables = set(variables)
        self._edges: Dict[Tuple[Variable, Variable], Relation] = {}
        self._selfs: Dict[Variable, Relation] = {}

    def add_variable(self, v: Variable) -> None:
        self._variables.add(v)

    def add(self, u: Variable, v: Variable, rel: Relation) -> None:
        self._variables.add(u)
        self._variables.add(v)
        if u == v:
            self._selfs[u] = self._selfs.get(u, Relation.full()) & rel
            return
        self._edges[(u, v)] = self._edges.get((u, v), Relation.full()) & rel
        conv = converse(rel)
        self._edges[(v, u)] = self._edges.get((v, u), Relation.full()) & conv

    def build(self) -> Qcsp:
        return Qcsp(
            variables=tuple(sorted(self._variables)),
            edges=dict(self._edges),
            selfs=dict(self._selfs),
        )


def _edge_matrix(network: Qcsp) -> Dict[Tuple[Variable, Variable], Relation]:
    """Dense ordered-pair map over the network's variables."""
    out: Dict[Tuple[Variable, Variable], Relation] = {}
    for u, v in itertools.permutations(network.variables, 2):
        out[(u, v)] = network.relation(u, v)
    return out


def _selfs_ok(network: Qcsp) -> bool:
    return all("EQ" in rel for rel in network.selfs.values())


def path_consistency(network: Qcsp) -> Optional[Qcsp]:
    """Close the network under the triangle rule.

    Repeatedly replaces C(i,j) with C(i,j) & compose(C(i,k), C(k,j)) until a
    fixed point.  Returns the refined network, or None when some edge (or an
    EQ-free self constraint) empties; None is the ordinary "inconsistent"
    answer, not an error.
    """
    if not _selfs_ok(network):
        return None
    if any(rel.is_empty() for rel in network.edges.values()):
        return None
    variables = network.variables
    if len(variables) < 2:
        return Qcsp(variables, {}, dict(network.selfs))
    matrix = _edge_matrix(network)
    queue = list(matrix.keys())
    queued = set(queue)

    def tighten(a: Variable, c: Variable, through: Relation) -> bool:
        old = matrix[(a, c)]
        new = old & through
        if new.mask == old.mask:
            return True
        if new.is_empty():
            return False
        matrix[(a, c)] = new
        matrix[(c, a)] = converse(new)
        for pair in ((a, c), (c, a)):
            if pair not in queued:
                queue.append(pair)
                queued.add(pair)
        return True

    while queue:
        i, j = queue.pop()
        queued.discard((i, j))
        for k in variables:
            if k == i or k == j:
                continue
            # Re-check the two triangles that route through the changed edge.
            if not tighten(i, k, compose(matrix[(i, j)], matrix[(j, k)])):
                return None
            if not tighten(k, j, compose(matrix[(k, i)], matrix[(i, j)])):
                return None
    edges = {pair: rel for pair, rel in matrix.items() if not rel.is_full()}
    return Qcsp(variables, edges, dict(network.selfs))


def _refine(network: Qcsp, u: Variable, v: Variable, rel: Relation) -> Qcsp:
    edges = dict(network.edges)
    edges[(u, v)] = rel
    edges[(v, u)] = converse(rel)
    return Qcsp(network.variables, edges, dict(network.selfs))


def _search_scenario(network: Qcsp) -> Optional[Qcsp]:
    closed = path_consistency(network)
    if closed is None:
        return None
    branch_pair = None
    branch_rel = None
    for u, v in itertools.combinations(closed.variables, 2):
        rel = closed.relation(u, v)
        if not rel.is_atomic():
            if branch_rel is None or len(rel) < len(branch_rel):
                branch_pair = (u, v)
                branch_rel = rel
    if branch_pair is None:
        # Fully atomic and path consistent, which decides RCC8 scenarios.
        return closed
    u, v = branch_pair
    for atom in branch_rel.atoms:
        result = _search_scenario(_refine(closed, u, v, Relation.of(atom)))
        if result is not None:
            return result
    return None


def is_consistent(network: Qcsp) -> bool:
    """Decide consistency by refinement search with path-consistency pruning."""
    return _search_scenario(network) is not None


def consistent_scenario(network: Qcsp) -> Optional[Qcsp]:
    """Return a consistent atomic refinement, complete over all pairs.

    The result fixes one atom for every ordered pair of variables of the
    input (missing pairs of the input count as full), or None when the
    network is inconsistent.
    """
    scenario = _search_scenario(network)
    if scenario is None:
        return None
    # The search branches until every pair, declared or implied, is atomic.
    edges = {
        (u, v): scenario.relation(u, v)
        for u, v in itertools.permutations(scenario.variables, 2)
    }
    return Qcsp(scenario.variables, edges, dict(scenario.selfs))
