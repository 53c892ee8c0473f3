"""Command-line surface: plan, simulate, exec, and export-dot subcommands.

Exit codes: 0 success, 1 file/parse errors, 2 planning failures, 3
simulation limits.  ``BBT_LOG`` (error|info|debug) controls diagnostics on
standard error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from .classic import run_classic
from .domain import GroundedDomain, ground, parse_domain
from .dot import to_dot
from .engine import SimulationLimits, simulate
from .errors import (
    BbtError,
    EmptyGoal,
    EntryLimitExceeded,
    IterationLimit,
    NoResolver,
    NothingFailed,
    ParseError,
    SemanticError,
    TickLimitExceeded,
    UnresolvableThreat,
)
from .planner import plan_request_from_domain, refine_tree
from .rng import CounterRng
from .status import Status
from .tree import reset_latches
from .treefile import load_tree, save_tree

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_PLANNING = 2
EXIT_LIMITS = 3

_INPUT_ERRORS = (ParseError, SemanticError, OSError)
_PLANNING_ERRORS = (EmptyGoal, NoResolver, NothingFailed, IterationLimit, UnresolvableThreat)
_LIMIT_ERRORS = (TickLimitExceeded, EntryLimitExceeded)


def _load_domain(args) -> GroundedDomain:
    text = Path(args.domain).read_text(encoding="utf-8")
    return ground(parse_domain(text))


def _limits(args) -> SimulationLimits:
    return SimulationLimits(
        max_root_ticks=args.max_ticks,
        max_entries=args.max_entries,
        prune_epsilon=args.prune_epsilon,
    )


def cmd_plan(args) -> int:
    domain = _load_domain(args)
    request = plan_request_from_domain(domain, target_probability=args.prob, limits=_limits(args))
    result = refine_tree(request)
    save_tree(result.tree, args.out)
    for line in result.log_lines():
        print(line)
    if args.dot:
        Path(args.dot).write_text(to_dot(result.tree), encoding="utf-8")
    log.info("plan reached probability %.6f in %d iterations", result.achieved, len(result.log))
    return EXIT_OK


def cmd_simulate(args) -> int:
    domain = _load_domain(args)
    tree = load_tree(args.tree, domain)
    record_flow = log.isEnabledFor(logging.DEBUG)
    result = simulate(tree, domain.initial_belief(), _limits(args), record_flow=record_flow)
    for flow_line in result.mass_flow or ():
        log.debug(flow_line)
    for line in result.terminal.debug_lines():
        print(line)
    if result.pruned_mass > 0.0:
        print(f"unresolved_mass {result.pruned_mass:.6f}")
    print(f"success_probability {result.terminal.success_probability():.6f}")
    return EXIT_OK


def cmd_exec(args) -> int:
    domain = _load_domain(args)
    tree = load_tree(args.tree, domain)
    analytical = simulate(tree, domain.initial_belief(), _limits(args))
    successes = 0
    for run_index in range(args.runs):
        reset_latches(tree)
        state = dict(domain.initial_assignment)
        rng = CounterRng(args.seed, run_index)
        status, _ = run_classic(tree, state, rng, max_ticks=args.max_ticks)
        if status is Status.S:
            successes += 1
    rate = successes / args.runs
    print(f"runs {args.runs}")
    print(f"empirical_success_rate {rate:.6f}")
    print(f"analytical_success_probability {analytical.terminal.success_probability():.6f}")
    return EXIT_OK


def cmd_export_dot(args) -> int:
    domain = _load_domain(args)
    tree = load_tree(args.tree, domain)
    text = to_dot(tree)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        print(text, end="")
    return EXIT_OK


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--domain", required=True, help="domain definition file")
    parser.add_argument("--max-ticks", type=int, default=10000, help="root tick budget")
    parser.add_argument("--max-entries", type=int, default=100000, help="belief entry budget")
    parser.add_argument(
        "--prune-epsilon",
        type=float,
        default=0.0,
        help="drop belief entries below this mass (reported, not renormalized)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bbt",
        description="Belief behavior trees: plan, simulate, execute, export.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    plan = sub.add_parser("plan", help="synthesize a tree for the domain's goal")
    _add_common(plan)
    plan.add_argument("--out", required=True, help="tree file to write")
    plan.add_argument("--dot", help="also write a DOT rendering here")
    plan.add_argument("--prob", type=float, help="override the domain's goal probability")
    plan.set_defaults(func=cmd_plan)

    simulate_cmd = sub.add_parser("simulate", help="exact belief-space simulation of a tree")
    _add_common(simulate_cmd)
    simulate_cmd.add_argument("--tree", required=True, help="tree file to simulate")
    simulate_cmd.set_defaults(func=cmd_simulate)

    exec_cmd = sub.add_parser("exec", help="Monte Carlo execution with sampled outcomes")
    _add_common(exec_cmd)
    exec_cmd.add_argument("--tree", required=True, help="tree file to execute")
    exec_cmd.add_argument("--seed", type=int, required=True, help="64-bit seed")
    exec_cmd.add_argument("--runs", type=int, required=True, help="number of runs")
    exec_cmd.set_defaults(func=cmd_exec)

    export = sub.add_parser("export-dot", help="render a tree file as Graphviz DOT")
    _add_common(export)
    export.add_argument("--tree", required=True, help="tree file to render")
    export.add_argument("--out", help="output path (stdout when omitted)")
    export.set_defaults(func=cmd_export_dot)

    return parser


def _configure_logging() -> None:
    level = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}.get(
        os.environ.get("BBT_LOG", "error").lower(), logging.ERROR
    )
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s")


def main(argv: list[str] | None = None) -> int:
    _configure_logging()
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except _PLANNING_ERRORS as exc:
        print(f"planning failed: {exc}", file=sys.stderr)
        return EXIT_PLANNING
    except _LIMIT_ERRORS as exc:
        print(f"simulation limit: {exc}", file=sys.stderr)
        return EXIT_LIMITS
    except BbtError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
