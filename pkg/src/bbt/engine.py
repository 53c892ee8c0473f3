"""Belief-space tick propagation and exhaustive self-simulation.

A tick threads a belief state through the tree: control nodes split each
incoming distribution on the child's return status, conditions rewrite the
return status, and actions schedule a delayed outcome that is expanded into
all its branches between root ticks.  Iterating root ticks until every
branch settles yields the exact distribution of execution results.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .belief import BeliefState, PhysicalState
from .errors import EntryLimitExceeded, NoPending, TickLimitExceeded
from .status import Status
from .tree import ActionNode, BTNode, Condition

ConditionHook = Callable[[Condition, BeliefState], None]


@dataclass(frozen=True)
class SimulationLimits:
    """Budget for self-simulation; exceeding one raises, never mis-answers."""

    max_root_ticks: int = 10000
    max_entries: int = 100000
    prune_epsilon: float = 0.0


@dataclass
class SimulationResult:
    """Exact terminal distribution of a simulation run.

    ``pruned_mass`` is reported, never renormalized away; ``mass_flow``
    carries one text line per root tick when flow recording was requested.
    """

    terminal: BeliefState
    ticks_used: int
    pruned_mass: float = 0.0
    mass_flow: list[str] | None = None


def schedule_delayed(node: ActionNode, mem: BeliefState) -> BeliefState:
    """Tick an action leaf: latch replay, one-per-tick guard, or schedule.

    Entries whose latch view has this node done replay the report status.
    Entries that already scheduled some action this tick return R untouched
    (one action at a time).  Fresh entries record the action as pending and
    return R; the outcome lands in :func:`apply_delayed` before the next
    root tick.
    """
    out = []
    for p, s in mem:
        done = s.latches.get(node.node_id)
        if done is not None:
            out.append((p, s.with_r(done)))
        elif s.pending is not None:
            out.append((p, s.with_r(Status.R)))
        else:
            out.append((p, s.scheduled(node.node_id, node.action)))
    return BeliefState(out)


def apply_delayed(mem: BeliefState) -> BeliefState:
    """Expand every entry over its pending action's outcomes and coalesce."""
    out = []
    for p, s in mem:
        if s.pending is None:
            raise NoPending(f"entry {s!r} has no pending action")
        node_id, action = s.pending
        for outcome in action.outcomes:
            if outcome.probability <= 0.0:
                continue
            out.append((p * outcome.probability, s.resolved(node_id, outcome)))
    return BeliefState(out).coalesce()


def belief_tick(
    node: BTNode,
    mem: BeliefState,
    from_child: int = 0,
    *,
    max_entries: int | None = None,
    on_condition: ConditionHook | None = None,
) -> BeliefState:
    """Propagate ``mem`` through ``node`` for one tick.

    Control nodes recurse both down the tree and rightward over children:
    after ticking child ``from_child``, entries returning the node's
    continue status flow to the next child while the rest are returned to
    the parent.  ``on_condition`` observes every condition evaluation, in
    tick order, with the post-evaluation belief.
    """
    if isinstance(node, Condition):
        out = mem.eval_condition(node.literal)
        if on_condition is not None:
            on_condition(node, out)
        return out
    if isinstance(node, ActionNode):
        return schedule_delayed(node, mem)
    if from_child >= len(node.children):
        return mem
    if not len(mem):
        return mem
    result = belief_tick(
        node.children[from_child], mem, max_entries=max_entries, on_condition=on_condition
    )
    if max_entries is not None and len(result) > max_entries:
        raise EntryLimitExceeded(len(result), max_entries)
    continuing, stopped = result.split_by(lambda s: s.r is node.continue_status)
    return stopped + belief_tick(
        node, continuing, from_child + 1, max_entries=max_entries, on_condition=on_condition
    )


def simulate(
    tree: BTNode,
    initial: BeliefState,
    limits: SimulationLimits | None = None,
    *,
    record_flow: bool = False,
) -> SimulationResult:
    """Run root ticks until every branch is a fixpoint.

    Entries that finish a root tick without a pending action cannot change
    under further ticks and move to the result; the rest expand their
    delayed outcomes and go around again.
    """
    limits = limits or SimulationLimits()
    mem = initial.coalesce()
    finished: list[tuple[float, PhysicalState]] = []
    pruned = 0.0
    flow: list[str] | None = [] if record_flow else None
    ticks = 0
    while len(mem):
        if ticks >= limits.max_root_ticks:
            raise TickLimitExceeded(limits.max_root_ticks)
        mem = belief_tick(tree, mem, max_entries=limits.max_entries)
        ticks += 1
        ended, mem = mem.split_by(lambda s: s.pending is None)
        finished.extend(ended.entries)
        if flow is not None:
            flow.append(f"tick {ticks} ended {ended.mass:.6f} pending {mem.mass:.6f}")
        if len(mem):
            mem = apply_delayed(mem)
            if limits.prune_epsilon > 0.0:
                mem, dropped = mem.prune(limits.prune_epsilon)
                pruned += dropped
            if len(mem) > limits.max_entries:
                raise EntryLimitExceeded(len(mem), limits.max_entries)
    terminal = BeliefState(finished).coalesce()
    return SimulationResult(terminal, ticks, pruned, flow)
