"""Positive boolean transition formulas and their disjunctive normal form.

Formulas are built from four generator kinds (concept literals, negated
concept literals, spatial constraints, moves) combined with And/Or only.
Negation exists solely at the literal level, so every formula is monotone in
its generators and has a DNF that is unique once duplicate and superset
disjuncts are removed and the remainder is sorted canonically.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterator, List, Tuple, Union

from .errors import InadmissibleDisjunctError, ResourceLimitError
from .terms import SpatialConstraint

__all__ = [
    "PosLiteral",
    "NegLiteral",
    "Constraint",
    "Move",
    "And",
    "Or",
    "Formula",
    "Generator",
    "Disjunct",
    "dnf",
    "partition",
    "generators",
    "encode_generator",
    "parse_literal",
    "DEFAULT_MAX_DISJUNCTS",
]

DEFAULT_MAX_DISJUNCTS = 10_000


@dataclass(frozen=True)
class PosLiteral:
    name: str


@dataclass(frozen=True)
class NegLiteral:
    name: str


@dataclass(frozen=True)
class Constraint:
    constraint: SpatialConstraint


@dataclass(frozen=True)
class Move:
    direction: str
    state: str


Generator = Union[PosLiteral, NegLiteral, Constraint, Move]


@dataclass(frozen=True)
class And:
    children: Tuple["Formula", ...]

    def __post_init__(self) -> None:
        if not self.children:
            raise ValueError("And needs at least one child")


@dataclass(frozen=True)
class Or:
    children: Tuple["Formula", ...]

    def __post_init__(self) -> None:
        if not self.children:
            raise ValueError("Or needs at least one child")


Formula = Union[And, Or, PosLiteral, NegLiteral, Constraint, Move]


def encode_generator(gen: Generator) -> str:
    """Canonical text form, also used as the deterministic sort key."""
    if isinstance(gen, PosLiteral):
        return gen.name
    if isinstance(gen, NegLiteral):
        return "!" + gen.name
    if isinstance(gen, Constraint):
        return gen.constraint.encode()
    if isinstance(gen, Move):
        return f"<{gen.direction}:{gen.state}>"
    raise TypeError(f"not a generator: {gen!r}")


def generators(formula: Formula) -> Iterator[Generator]:
    """Yield every generator occurrence, left to right."""
    if isinstance(formula, (And, Or)):
        for child in formula.children:
            yield from generators(child)
    else:
        yield formula


def parse_literal(text: str) -> Union[PosLiteral, NegLiteral]:
    """Inverse of ``encode_generator`` for concept literals."""
    name = text[1:] if text.startswith("!") else text
    if not name or name.startswith("!"):
        raise ValueError(f"malformed literal: {text!r}")
    return NegLiteral(name) if text.startswith("!") else PosLiteral(name)


@dataclass(frozen=True)
class Disjunct:
    """One DNF disjunct, its generators grouped by kind."""

    literals: FrozenSet[Union[PosLiteral, NegLiteral]]
    constraints: FrozenSet[SpatialConstraint]
    moves: FrozenSet[Move]

    @staticmethod
    def from_generators(gens: FrozenSet[Generator]) -> "Disjunct":
        literals = frozenset(g for g in gens if isinstance(g, (PosLiteral, NegLiteral)))
        constraints = frozenset(
            g.constraint for g in gens if isinstance(g, Constraint)
        )
        moves = frozenset(g for g in gens if isinstance(g, Move))
        return Disjunct(literals, constraints, moves)

    @property
    def generators(self) -> FrozenSet[Generator]:
        gens: List[Generator] = list(self.literals)
        gens.extend(Constraint(c) for c in self.constraints)
        gens.extend(self.moves)
        return frozenset(gens)

    def is_admissible(self) -> bool:
        positive = {g.name for g in self.literals if isinstance(g, PosLiteral)}
        negative = {g.name for g in self.literals if isinstance(g, NegLiteral)}
        return not (positive & negative)

    def sort_key(self) -> Tuple[str, ...]:
        return tuple(sorted(encode_generator(g) for g in self.generators))


def _expand(formula: Formula, cap: int) -> List[FrozenSet[Generator]]:
    if isinstance(formula, Or):
        out: List[FrozenSet[Generator]] = []
        for child in formula.children:
            out.extend(_expand(child, cap))
            if len(out) > cap:
                raise ResourceLimitError(
                    f"DNF exceeds {cap} disjuncts; raise the cap to proceed"
                )
        return out
    if isinstance(formula, And):
        product: List[FrozenSet[Generator]] = [frozenset()]
        for child in formula.children:
            branches = _expand(child, cap)
            if len(product) * len(branches) > cap:
                raise ResourceLimitError(
                    f"DNF exceeds {cap} disjuncts; raise the cap to proceed"
                )
            product = [a | b for a, b in itertools.product(product, branches)]
        return product
    return [frozenset((formula,))]


def dnf(formula: Formula, *, max_disjuncts: int = DEFAULT_MAX_DISJUNCTS) -> List[Disjunct]:
    """Disjunctive normal form with redundant disjuncts removed.

    Duplicates and strict supersets of other disjuncts are dropped (both are
    absorbed under the monotone semantics), and the survivors are sorted by
    their canonical generator encodings, so equal formulas yield identical
    lists.
    """
    raw = _expand(formula, max_disjuncts)
    unique = sorted(set(raw), key=len)
    kept: List[FrozenSet[Generator]] = []
    for candidate in unique:
        if any(existing < candidate for existing in kept):
            continue
        kept.append(candidate)
    disjuncts = [Disjunct.from_generators(gens) for gens in kept]
    disjuncts.sort(key=Disjunct.sort_key)
    return disjuncts


def partition(
    disjunct: Disjunct,
) -> Tuple[
    FrozenSet[Union[PosLiteral, NegLiteral]],
    FrozenSet[SpatialConstraint],
    Dict[str, FrozenSet[str]],
]:
    """Split a disjunct into literals, constraints, and moves by direction.

    Directions without moves are absent from the map.  Raises
    InadmissibleDisjunctError when the literal set contains both A and !A.
    """
    if not disjunct.is_admissible():
        positive = {g.name for g in disjunct.literals if isinstance(g, PosLiteral)}
        negative = {g.name for g in disjunct.literals if isinstance(g, NegLiteral)}
        clash = sorted(positive & negative)
        raise InadmissibleDisjunctError(
            f"complementary literal pair on {', '.join(clash)}"
        )
    moves_by_direction: Dict[str, set] = {}
    for move in disjunct.moves:
        moves_by_direction.setdefault(move.direction, set()).add(move.state)
    return (
        disjunct.literals,
        disjunct.constraints,
        {d: frozenset(states) for d, states in moves_by_direction.items()},
    )
