"""Classic execution: one physical state, sampled action outcomes.

This is the runtime counterpart of the belief-space engine and the basis of
the Monte Carlo cross-check.  The state is a plain ``dict`` mapping every
grounded literal to a :class:`~bbt.status.Status`; ticks mutate only that
dict and the action latches.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol

from .errors import TickLimitExceeded, UnknownLiteral
from .status import Status
from .tree import ActionNode, BTNode, Condition


class RandomSource(Protocol):
    def random(self) -> float: ...


@dataclass
class ExecutionTrace:
    """Node returns per tick plus the realized outcome of each started action."""

    events: list[tuple[int, int, Status]] = field(default_factory=list)
    outcomes: list[tuple[str, int]] = field(default_factory=list)


def sample_outcome_index(action, u: float) -> int:
    """Map a uniform draw in [0, 1) to an outcome index by cumulative mass."""
    acc = 0.0
    for i, outcome in enumerate(action.outcomes):
        acc += outcome.probability
        if u < acc:
            return i
    return len(action.outcomes) - 1


def classic_tick(
    node: BTNode,
    state: dict[str, Status],
    rng: RandomSource,
    *,
    trace: ExecutionTrace | None = None,
    tick_index: int = 0,
) -> Status:
    """Run one root tick of ``node`` on ``state``.

    At most one fresh action starts per tick; it returns R where it is
    reached and its sampled outcome is applied to ``state`` (latching the
    node done) after the walk finishes, i.e. before the next root tick.
    Later fresh actions reached in the same tick return R without starting.
    """
    started: list[ActionNode] = []
    status = _tick(node, state, started, trace, tick_index)
    if started:
        action_node = started[0]
        index = sample_outcome_index(action_node.action, rng.random())
        outcome = action_node.action.outcomes[index]
        for literal, value in outcome.postconditions:
            if literal not in state:
                raise UnknownLiteral(literal)
            state[literal] = value
        action_node.latch = outcome.report
        action_node.started = False
        if trace is not None:
            trace.outcomes.append((action_node.action.id, index))
    return status


def _tick(
    node: BTNode,
    state: dict[str, Status],
    started: list[ActionNode],
    trace: ExecutionTrace | None,
    tick_index: int,
) -> Status:
    if isinstance(node, Condition):
        try:
            status = state[node.literal]
        except KeyError:
            raise UnknownLiteral(node.literal) from None
    elif isinstance(node, ActionNode):
        if node.latch is not None:
            status = node.latch
        elif started:
            # one action per root tick: a second fresh action waits
            status = Status.R
        else:
            node.started = True
            started.append(node)
            status = Status.R
    else:
        status = node.continue_status
        for child in node.children:
            child_status = _tick(child, state, started, trace, tick_index)
            if child_status is not node.continue_status:
                status = child_status
                break
    if trace is not None:
        trace.events.append((tick_index, node.node_id, status))
    return status


def run_classic(
    tree: BTNode,
    state: dict[str, Status],
    rng: RandomSource,
    max_ticks: int = 10000,
) -> tuple[Status, ExecutionTrace]:
    """Tick until a root tick starts no action; that tick's status is final."""
    trace = ExecutionTrace()
    for tick_index in range(max_ticks):
        before = len(trace.outcomes)
        status = classic_tick(tree, state, rng, trace=trace, tick_index=tick_index)
        if len(trace.outcomes) == before:
            return status, trace
    raise TickLimitExceeded(max_ticks)
