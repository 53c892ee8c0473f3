"""Iterative tree synthesis: simulate, find the weakest condition, resolve.

Each round self-simulates the current tree, picks the most probable deepest
condition that returned F or R on the terminal branches, and either reorders
siblings (when an earlier action clobbers the target literal) or inserts a
latched resolver under a Skipper (unknown value) or Fallback (false value).
The loop stops once the success probability reaches the request's target.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

from .belief import ActionInstance, BeliefState, PhysicalState
from .domain import GroundedDomain, TemplateInstance, resolver_outcomes
from .engine import SimulationLimits, belief_tick, simulate
from .errors import (
    EmptyGoal,
    IterationLimit,
    NoResolver,
    NothingFailed,
    UnknownLiteral,
    UnresolvableThreat,
)
from .status import Status
from .tree import (
    ActionNode,
    BTNode,
    Condition,
    Fallback,
    Sequence,
    Skipper,
    node_by_id,
    node_depths,
    parent_map,
    preorder_index,
)

Resolver = Union[ActionInstance, TemplateInstance]

PROB_MARGIN = 1e-12


@dataclass(frozen=True)
class PlanRequest:
    """One planning problem over a grounded domain."""

    domain: GroundedDomain
    initial: BeliefState
    goal: tuple[tuple[str, Status], ...]
    target_probability: float
    limits: SimulationLimits = SimulationLimits()
    max_iterations: int = 64


@dataclass(frozen=True)
class FailedConditionReport:
    """The condition chosen for resolution, with its supporting evidence.

    ``table`` lists, for every non-success terminal entry, the entry index
    and the deepest condition (node id, observed status) that returned non-S
    during that entry's final root tick; ``mass`` is the cumulative
    probability of the entries that picked this target.
    """

    node_id: int
    literal: str
    observed: Status
    mass: float
    table: tuple[tuple[int, int, Status], ...]


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    kind: str  # "insert" | "threat-reorder"
    literal: str
    probability: float


@dataclass
class PlanResult:
    tree: BTNode
    achieved: float
    log: tuple[IterationRecord, ...]

    def log_lines(self) -> list[str]:
        return [
            f"{r.iteration}\t{r.kind}\t{r.literal}\t{r.probability:.6f}" for r in self.log
        ]


def initial_tree(goal_literals: list[str]) -> Sequence:
    """A root sequence of one condition per goal literal, in input order."""
    if not goal_literals:
        raise EmptyGoal("a goal needs at least one condition")
    return Sequence([Condition(lit) for lit in goal_literals])


def _conditions_of_final_tick(tree: BTNode, state: PhysicalState) -> list[tuple[Condition, Status]]:
    """Replay one root tick of a settled entry, recording condition returns.

    Settled entries are fixpoints, so the replay reproduces their final root
    tick exactly; it can never reach a fresh action.
    """
    seen: list[tuple[Condition, Status]] = []

    def record(node: Condition, after: BeliefState) -> None:
        (_, s), = after.entries
        seen.append((node, s.r))

    out = belief_tick(tree, BeliefState.point(state), on_condition=record)
    (_, result), = out.entries
    if result.pending is not None:
        raise AssertionError("settled entry scheduled an action on replay")
    return seen


def find_failed_condition(tree: BTNode, terminal: BeliefState) -> FailedConditionReport:
    """Pick the most probable deepest failed condition over non-S entries.

    Per entry, the deepest condition returning F or R during its final root
    tick is charged with the failure; across entries the (condition,
    observed status) pair with the highest cumulative mass wins.  Ties break
    toward greater depth, then leftmost position, then literal.
    """
    depths = node_depths(tree)
    order = preorder_index(tree)
    table: list[tuple[int, int, Status]] = []
    masses: dict[tuple[int, Status], float] = {}
    nodes: dict[int, Condition] = {}
    failed_entries = 0
    for index, (p, state) in enumerate(terminal.entries):
        if state.r is Status.S:
            continue
        failed_entries += 1
        candidates = [
            (node, status)
            for node, status in _conditions_of_final_tick(tree, state)
            if status is not Status.S
        ]
        if not candidates:
            continue
        node, observed = max(
            candidates, key=lambda c: (depths[c[0].node_id], -order[c[0].node_id])
        )
        table.append((index, node.node_id, observed))
        masses[(node.node_id, observed)] = masses.get((node.node_id, observed), 0.0) + p
        nodes[node.node_id] = node
    if not masses:
        raise NothingFailed(
            "no failed condition to resolve"
            if failed_entries
            else "every terminal entry already succeeds"
        )
    ranked = sorted(
        masses.items(),
        key=lambda item: (
            -item[1],
            -depths[item[0][0]],
            order[item[0][0]],
            nodes[item[0][0]].literal,
            item[0][1],
        ),
    )
    (node_id, observed), mass = ranked[0]
    return FailedConditionReport(
        node_id=node_id,
        literal=nodes[node_id].literal,
        observed=observed,
        mass=mass,
        table=tuple(table),
    )


def _holds_or_resolvable(
    precondition: tuple[str, Status], state: PhysicalState, domain: GroundedDomain
) -> bool:
    literal, value = precondition
    try:
        if state.value(literal) is value:
            return True
    except UnknownLiteral:
        return False
    return domain.assignable(literal, value)


def select_resolver(
    target: FailedConditionReport,
    domain: GroundedDomain,
    history: Mapping[str, int],
    supporting: list[tuple[float, PhysicalState]],
) -> Resolver:
    """Choose the action or template to establish the target literal.

    Candidates must have an outcome setting the literal to S; when the
    condition was observed unknown, only perception candidates (those whose
    preconditions require the literal to be R) qualify.  The score is the
    outcome mass establishing the literal, times the fraction of the target's
    failing mass where all candidate preconditions hold or can be made to
    hold, decayed by 0.9 per previous use.
    """
    total = sum(p for p, _ in supporting)
    scored: list[tuple[float, str, Resolver]] = []
    for candidate in domain.resolvers():
        gain = sum(
            o.probability
            for o in resolver_outcomes(candidate)
            if (target.literal, Status.S) in o.postconditions
        )
        if gain <= 0.0:
            continue
        if target.observed is Status.R and (
            (target.literal, Status.R) not in candidate.preconditions
        ):
            continue
        if total > 0.0:
            feasible = sum(
                p
                for p, s in supporting
                if all(_holds_or_resolvable(pre, s, domain) for pre in candidate.preconditions)
            )
            feasibility = feasible / total
        else:
            feasibility = 1.0
        score = gain * feasibility * (0.9 ** history.get(candidate.id, 0))
        if score > 0.0:
            scored.append((score, candidate.id, candidate))
    if not scored:
        raise NoResolver(target.literal)
    scored.sort(key=lambda item: (-item[0], item[1]))
    return scored[0][2]


def _resolver_subtree(resolver: Resolver) -> Sequence:
    """Guard conditions for S-valued preconditions, then the resolver itself.

    F- and R-valued preconditions are selection-time constraints only: a
    condition node returns the raw stored status, so guarding on them would
    break sequence routing.
    """
    guards = [
        Condition(literal)
        for literal, value in resolver.preconditions
        if value is Status.S
    ]
    if isinstance(resolver, ActionInstance):
        body: BTNode = ActionNode(resolver)
    else:
        body = resolver.instantiate()
    return Sequence([*guards, body])


def resolve_by_insert(
    tree: BTNode,
    target_node: Condition,
    observed: Status,
    resolver: Resolver,
    wrappers: dict[int, str] | None = None,
) -> BTNode:
    """Attach a latched resolver at the target condition.

    Unknown conditions get a Skipper wrapper, false ones a Fallback.  When
    the target already sits under a wrapper created for the same literal and
    kind, the new resolver is appended as its next child instead of nesting
    another wrapper.
    """
    wrapper_kind = Skipper if observed is Status.R else Fallback
    subtree = _resolver_subtree(resolver)
    if wrappers is None:
        wrappers = {}
    parents = parent_map(tree)
    parent = parents.get(target_node.node_id)
    if (
        parent is not None
        and isinstance(parent, wrapper_kind)
        and wrappers.get(parent.node_id) == target_node.literal
    ):
        parent.children.append(subtree)
        return tree
    wrapper = wrapper_kind([target_node, subtree])
    wrappers[wrapper.node_id] = target_node.literal
    if parent is None:
        return wrapper
    parent.children[parent.children.index(target_node)] = wrapper
    return tree


def find_threat(tree: BTNode, target_node: Condition, literal: str) -> ActionNode | None:
    """First action in tick order, before the target, that can break ``literal``.

    An action threatens the target when one of its outcomes assigns the
    literal anything other than S.
    """
    order = preorder_index(tree)
    limit = order[target_node.node_id]
    for node in tree.iter_nodes():
        if not isinstance(node, ActionNode) or order[node.node_id] >= limit:
            continue
        clobbers = any(
            lit == literal and value is not Status.S
            for outcome in node.action.outcomes
            for lit, value in outcome.postconditions
        )
        if clobbers:
            return node
    return None


def resolve_threat(tree: BTNode, target_node: Condition, conflict: ActionNode) -> BTNode:
    """Reorder siblings so the target precedes the conflicting action.

    Within the lowest common ancestor of the two nodes, the child subtree
    holding the target moves to just before the child holding the conflict;
    every other relative order is preserved.
    """
    parents = parent_map(tree)

    def ancestors(node: BTNode) -> list[BTNode]:
        chain = [node]
        while chain[-1].node_id in parents:
            chain.append(parents[chain[-1].node_id])
        return chain

    target_chain = ancestors(target_node)
    conflict_chain = ancestors(conflict)
    conflict_ids = {n.node_id: i for i, n in enumerate(conflict_chain)}
    lca = target_child = conflict_child = None
    for i, node in enumerate(target_chain):
        if node.node_id in conflict_ids:
            lca = node
            target_child = target_chain[i - 1] if i > 0 else None
            conflict_child = (
                conflict_chain[conflict_ids[node.node_id] - 1]
                if conflict_ids[node.node_id] > 0
                else None
            )
            break
    if lca is None or target_child is None or conflict_child is None:
        raise UnresolvableThreat(
            f"cannot reorder {conflict.action.id!r} behind {target_node.literal!r}"
        )
    children = lca.children
    children.remove(target_child)
    children.insert(children.index(conflict_child), target_child)
    return tree


def refine_tree(request: PlanRequest) -> PlanResult:
    """Run the synthesis loop until the target probability is reached.

    Raises :class:`NoResolver`, :class:`NothingFailed` or
    :class:`IterationLimit` when the goal is unreachable within budget;
    simulation limit errors propagate unchanged.
    """
    domain = request.domain
    if not 0.0 < request.target_probability <= 1.0:
        raise ValueError(f"target probability {request.target_probability!r} not in (0, 1]")
    for literal, _ in request.goal:
        if literal not in domain.allowed_values:
            raise UnknownLiteral(literal)
    tree: BTNode = initial_tree([literal for literal, _ in request.goal])
    wrappers: dict[int, str] = {}
    history: dict[str, int] = {}
    log: list[IterationRecord] = []
    result = simulate(tree, request.initial, request.limits)
    probability = result.terminal.success_probability()
    iteration = 0
    while probability < request.target_probability - PROB_MARGIN:
        iteration += 1
        if iteration > request.max_iterations:
            raise IterationLimit(request.max_iterations, probability)
        report = find_failed_condition(tree, result.terminal)
        target_node = node_by_id(tree, report.node_id)
        assert isinstance(target_node, Condition)
        conflict = find_threat(tree, target_node, report.literal)
        if conflict is not None:
            tree = resolve_threat(tree, target_node, conflict)
            kind = "threat-reorder"
        else:
            supporting = [
                result.terminal.entries[index]
                for index, node_id, observed in report.table
                if node_id == report.node_id and observed is report.observed
            ]
            resolver = select_resolver(report, domain, history, supporting)
            tree = resolve_by_insert(tree, target_node, report.observed, resolver, wrappers)
            history[resolver.id] = history.get(resolver.id, 0) + 1
            kind = "insert"
        result = simulate(tree, request.initial, request.limits)
        probability = result.terminal.success_probability()
        log.append(IterationRecord(iteration, kind, report.literal, probability))
    return PlanResult(tree=tree, achieved=probability, log=tuple(log))


def plan_request_from_domain(
    domain: GroundedDomain,
    target_probability: float | None = None,
    limits: SimulationLimits | None = None,
    max_iterations: int = 64,
) -> PlanRequest:
    """Build a request from a domain's declared initial state and goal."""
    probability = (
        target_probability if target_probability is not None else domain.goal_probability
    )
    if probability is None:
        raise EmptyGoal("the domain declares no goal probability and none was given")
    return PlanRequest(
        domain=domain,
        initial=domain.initial_belief(),
        goal=domain.goal,
        target_probability=probability,
        limits=limits or SimulationLimits(),
        max_iterations=max_iterations,
    )
