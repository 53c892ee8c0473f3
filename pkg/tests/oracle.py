"""Independent brute-force executor used as the reference for the engine.

Enumerates every outcome sequence of a tree explicitly: run one tick with a
plain recursive walk (each control kind spelled out separately), branch over
all outcomes of the action that started, and recurse until a tick starts
nothing.  Shares only the data model with the engine, none of its logic.
"""

from __future__ import annotations

from collections import defaultdict

from bbt.status import Status
from bbt.tree import ActionNode, BTNode, Condition, Fallback, Sequence, Skipper

TerminalKey = tuple[frozenset, Status, frozenset]


def tick_once(
    node: BTNode,
    assignment: dict[str, Status],
    latches: dict[int, Status],
    started: list[ActionNode],
) -> Status:
    if isinstance(node, Condition):
        return assignment[node.literal]
    if isinstance(node, ActionNode):
        if node.node_id in latches:
            return latches[node.node_id]
        if not started:
            started.append(node)
        return Status.R
    if isinstance(node, Sequence):
        for child in node.children:
            status = tick_once(child, assignment, latches, started)
            if status is not Status.S:
                return status
        return Status.S
    if isinstance(node, Fallback):
        for child in node.children:
            status = tick_once(child, assignment, latches, started)
            if status is not Status.F:
                return status
        return Status.F
    if isinstance(node, Skipper):
        for child in node.children:
            status = tick_once(child, assignment, latches, started)
            if status is not Status.R:
                return status
        return Status.R
    raise TypeError(f"unknown node {node!r}")


def enumerate_terminals(
    tree: BTNode, assignment: dict[str, Status], max_ticks: int = 200
) -> dict[TerminalKey, float]:
    """Exact terminal distribution keyed by (assignment, status, latches)."""
    results: dict[TerminalKey, float] = defaultdict(float)

    def run(state: dict[str, Status], latches: dict[int, Status], prob: float, ticks: int):
        if ticks > max_ticks:
            raise RuntimeError("oracle exceeded tick budget")
        started: list[ActionNode] = []
        status = tick_once(tree, state, latches, started)
        if not started:
            key = (frozenset(state.items()), status, frozenset(latches.items()))
            results[key] += prob
            return
        node = started[0]
        for outcome in node.action.outcomes:
            if outcome.probability <= 0.0:
                continue
            next_state = dict(state)
            next_state.update(outcome.postconditions)
            next_latches = dict(latches)
            next_latches[node.node_id] = outcome.report
            run(next_state, next_latches, prob * outcome.probability, ticks + 1)

    run(dict(assignment), {}, 1.0, 0)
    return dict(results)


def success_probability(terminals: dict[TerminalKey, float]) -> float:
    return sum(p for (_, status, _), p in terminals.items() if status is Status.S)


def simulation_to_terminals(result) -> dict[TerminalKey, float]:
    """Project a SimulationResult onto the oracle's key space."""
    out: dict[TerminalKey, float] = defaultdict(float)
    for p, state in result.terminal.entries:
        assert state.pending is None
        key = (
            frozenset(state.assignment.items()),
            state.r,
            frozenset(state.latches.items()),
        )
        out[key] += p
    return dict(out)


def assert_distributions_match(expected, actual, tol: float = 1e-12) -> None:
    keys = set(expected) | set(actual)
    for key in keys:
        delta = abs(expected.get(key, 0.0) - actual.get(key, 0.0))
        assert delta <= tol, f"mass mismatch {delta!r} on {key}"
