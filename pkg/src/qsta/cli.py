"""Command line front end: validate, simulate, emptiness, check-witness.

Exit codes: ``emptiness`` uses 0 for not-empty, 1 for empty; ``validate``
and ``check-witness`` use 0 for clean, 1 for defects; every command uses 2
for errors (syntax, invalid input automaton, resource limits).  Resource
caps come from the environment: QSTA_MAX_DISJUNCTS, QSTA_MAX_SIM_STATES,
QSTA_MAX_SEARCH_NODES.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import List, Optional

from . import emptiness as emp
from .automata import AlternatingAutomaton, NondetAutomaton, metrics, validate, validate_run_prefix
from .dsl import load_automaton, print_automaton
from .errors import DslSyntaxError, MalformedModelError, ResourceLimitError
from .formula import DEFAULT_MAX_DISJUNCTS
from .simulate import DEFAULT_MAX_SIM_STATES, sim_state_bound, simulate

__all__ = ["main"]


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}")
    if value <= 0:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


def _load(path: str):
    return load_automaton(Path(path).read_text(encoding="utf-8"))


def _as_nondet(automaton, *, origin: str) -> NondetAutomaton:
    """Validate and, for alternating input, simulate first."""
    defects = validate(automaton)
    if defects:
        for defect in defects:
            print(f"{origin}: {defect}", file=sys.stderr)
        raise ValueError(f"{origin}: automaton is not well formed")
    if isinstance(automaton, AlternatingAutomaton):
        return simulate(
            automaton,
            max_states=_env_int("QSTA_MAX_SIM_STATES", DEFAULT_MAX_SIM_STATES),
            max_disjuncts=_env_int("QSTA_MAX_DISJUNCTS", DEFAULT_MAX_DISJUNCTS),
        )
    return automaton


def _cmd_validate(args: argparse.Namespace) -> int:
    automaton = _load(args.file)
    defects = validate(automaton)
    for defect in defects:
        print(defect)
    return 0 if not defects else 1


def _cmd_simulate(args: argparse.Namespace) -> int:
    automaton = _load(args.file)
    if not isinstance(automaton, AlternatingAutomaton):
        raise ValueError("simulate expects an alternating automaton")
    defects = validate(automaton)
    if defects:
        for defect in defects:
            print(f"{args.file}: {defect}", file=sys.stderr)
        return 2
    result = simulate(
        automaton,
        max_states=_env_int("QSTA_MAX_SIM_STATES", DEFAULT_MAX_SIM_STATES),
        max_disjuncts=_env_int("QSTA_MAX_DISJUNCTS", DEFAULT_MAX_DISJUNCTS),
    )
    Path(args.output).write_text(print_automaton(result), encoding="utf-8")
    print(f"states: {len(result.states)}")
    print(f"bound: {sim_state_bound(len(automaton.states), len(automaton.accepting))}")
    return 0


def _cmd_emptiness(args: argparse.Namespace) -> int:
    automaton = _as_nondet(_load(args.file), origin=args.file)
    max_nodes: Optional[int] = args.max_nodes
    if max_nodes is None:
        env = os.environ.get("QSTA_MAX_SEARCH_NODES")
        if env is not None:
            max_nodes = _env_int("QSTA_MAX_SEARCH_NODES", 0)
    decision = emp.decide(
        automaton, max_nodes=max_nodes, unfold_depth=args.unfold_depth
    )
    for note in decision.diagnostics:
        print(f"note: {note}", file=sys.stderr)
    for defect in decision.prefix_defects:
        print(f"warning: unfolded prefix: {defect}", file=sys.stderr)
    print(decision.verdict)
    if decision.nonempty:
        if args.witness:
            payload = emp.witness_to_json(decision.witness)
            Path(args.witness).write_text(
                json.dumps(payload, indent=2, ensure_ascii=False) + "\n",
                encoding="utf-8",
            )
        if args.dot:
            Path(args.dot).write_text(
                emp.witness_to_dot(decision.witness), encoding="utf-8"
            )
        return 0
    return 1


def _cmd_check_witness(args: argparse.Namespace) -> int:
    automaton = _as_nondet(_load(args.file), origin=args.file)
    payload = json.loads(Path(args.witness).read_text(encoding="utf-8"))
    model = emp.witness_from_json(payload)
    defects = emp.check_witness(automaton, model)
    if not defects:
        bounds = emp.check_bounds(model, metrics(automaton), len(automaton.states))
        if not bounds.ok:
            detail = (
                f"internal {bounds.internal_count}/{bounds.internal_bound}, "
                f"leaves {bounds.leaf_count}/{bounds.leaf_bound}"
            )
            defects.append(f"node bounds violated ({detail})")
            for first, second in bounds.duplicate_signatures:
                defects.append(f"internal nodes '{first}' and '{second}' share a signature")
    if not defects:
        depth = (
            args.unfold_depth if args.unfold_depth is not None else 3 * model.height
        )
        prefix, sources = emp.unfold_with_sources(model, depth)
        scene = emp.scene_from_witness(model, prefix, sources)
        report = validate_run_prefix(automaton, prefix, scene)
        defects.extend(f"unfold depth {depth}: {d}" for d in report.defects)
    for defect in defects:
        print(defect)
    if not defects:
        print("ok")
        return 0
    return 1


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="qsta",
        description="Tree automata with qualitative spatial constraints.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="report structural defects")
    p_validate.add_argument("file")
    p_validate.set_defaults(run=_cmd_validate)

    p_simulate = sub.add_parser(
        "simulate", help="translate an alternating automaton to a nondeterministic one"
    )
    p_simulate.add_argument("file")
    p_simulate.add_argument("-o", "--output", required=True)
    p_simulate.set_defaults(run=_cmd_simulate)

    p_empty = sub.add_parser("emptiness", help="decide emptiness")
    p_empty.add_argument("file")
    p_empty.add_argument("--witness", help="write the witness as JSON")
    p_empty.add_argument("--dot", help="write the witness as DOT")
    p_empty.add_argument("--unfold-depth", type=int, default=None)
    p_empty.add_argument("--max-nodes", type=int, default=None)
    p_empty.set_defaults(run=_cmd_emptiness)

    p_check = sub.add_parser("check-witness", help="re-validate a stored witness")
    p_check.add_argument("file")
    p_check.add_argument("witness")
    p_check.add_argument("--unfold-depth", type=int, default=None)
    p_check.set_defaults(run=_cmd_check_witness)

    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except DslSyntaxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (MalformedModelError, ResourceLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
