"""Behavior tree structure: control nodes, leaves, latches, and tree walks."""

from __future__ import annotations

import itertools
from typing import ClassVar, Iterable, Iterator

from .belief import ActionInstance
from .status import Status

_node_ids = itertools.count()


class BTNode:
    """Base tree node; ``node_id`` is unique and survives planner edits."""

    kind: ClassVar[str] = "node"
    __slots__ = ("node_id", "children")

    def __init__(self, children: Iterable["BTNode"] = ()):
        self.node_id = next(_node_ids)
        self.children = list(children)

    def iter_nodes(self) -> Iterator["BTNode"]:
        """Pre-order traversal, which is also tick order."""
        yield self
        for child in self.children:
            yield from child.iter_nodes()

    def signature(self):
        """Structural identity, independent of node ids and latches."""
        return (self.kind, tuple(c.signature() for c in self.children))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(id={self.node_id}, {len(self.children)} children)"


class ControlNode(BTNode):
    """Generic left-to-right scan over children.

    The three control kinds share one execution algorithm and differ only in
    the status on which the scan moves to the next child; the first child
    returning anything else decides the node's own return.
    """

    continue_status: ClassVar[Status]

    def __init__(self, children: Iterable[BTNode]):
        super().__init__(children)
        if not self.children:
            raise ValueError(f"{self.kind} node needs at least one child")


class Sequence(ControlNode):
    kind = "sequence"
    continue_status = Status.S


class Fallback(ControlNode):
    kind = "fallback"
    continue_status = Status.F


class Skipper(ControlNode):
    kind = "skipper"
    continue_status = Status.R


class Condition(BTNode):
    """Leaf returning the stored value of one grounded literal."""

    kind = "condition"
    __slots__ = ("literal",)

    def __init__(self, literal: str):
        super().__init__()
        self.literal = literal

    def signature(self):
        return (self.kind, self.literal)

    def __repr__(self) -> str:
        return f"Condition({self.literal!r}, id={self.node_id})"


class ActionNode(BTNode):
    """Leaf wrapping a grounded action, with a latch.

    The latch runs fresh -> pending -> done and done is absorbing: a finished
    action never executes again and replays its report status.  ``latch``
    holds the done status (None while fresh or pending); ``started`` marks
    the pending stage during classic execution.  Belief-space simulation
    keeps its own per-branch latch views and ignores these fields.
    """

    kind = "action"
    __slots__ = ("action", "latch", "started")

    def __init__(self, action: ActionInstance):
        super().__init__()
        self.action = action
        self.latch: Status | None = None
        self.started = False

    def signature(self):
        return (self.kind, self.action.id)

    def __repr__(self) -> str:
        return f"ActionNode({self.action.id!r}, id={self.node_id})"


CONTROL_KINDS = {cls.kind: cls for cls in (Sequence, Fallback, Skipper)}


def reset_latches(tree: BTNode) -> BTNode:
    """Return ``tree`` with every action latch back to fresh."""
    for node in tree.iter_nodes():
        if isinstance(node, ActionNode):
            node.latch = None
            node.started = False
    return tree


def node_depths(tree: BTNode) -> dict[int, int]:
    """Edge distance from the root, keyed by node id."""
    depths: dict[int, int] = {}

    def walk(node: BTNode, depth: int) -> None:
        depths[node.node_id] = depth
        for child in node.children:
            walk(child, depth + 1)

    walk(tree, 0)
    return depths


def preorder_index(tree: BTNode) -> dict[int, int]:
    """Tick-order rank of every node, keyed by node id."""
    return {node.node_id: i for i, node in enumerate(tree.iter_nodes())}


def parent_map(tree: BTNode) -> dict[int, BTNode]:
    """Parent of every non-root node, keyed by child node id."""
    parents: dict[int, BTNode] = {}
    for node in tree.iter_nodes():
        for child in node.children:
            parents[child.node_id] = node
    return parents


def node_by_id(tree: BTNode, node_id: int) -> BTNode:
    for node in tree.iter_nodes():
        if node.node_id == node_id:
            return node
    raise KeyError(f"no node with id {node_id}")


def validate_tree(tree: BTNode) -> None:
    """Check the structural invariants: leaf/control arity and unique ids."""
    seen: set[int] = set()
    for node in tree.iter_nodes():
        if node.node_id in seen:
            raise ValueError(f"duplicate node id {node.node_id}")
        seen.add(node.node_id)
        if isinstance(node, (Condition, ActionNode)):
            if node.children:
                raise ValueError(f"leaf {node!r} has children")
        elif not node.children:
            raise ValueError(f"control node {node!r} has no children")


def structurally_equal(a: BTNode, b: BTNode) -> bool:
    return a.signature() == b.signature()
