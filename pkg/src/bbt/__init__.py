"""Belief behavior trees.

Behavior trees whose conditions take values in {success, failure, unknown}
and whose actions have probabilistic, latched outcomes; plus exact
belief-space self-simulation and an iterative planner that grows a tree
until a goal holds with a target probability.
"""

from .belief import ActionInstance, BeliefState, Outcome, PhysicalState
from .classic import ExecutionTrace, classic_tick, run_classic
from .domain import (
    DomainSpec,
    GroundedDomain,
    TemplateInstance,
    ground,
    instantiate_template,
    parse_domain,
    serialize_domain,
)
from .dot import to_dot
from .engine import (
    SimulationLimits,
    SimulationResult,
    apply_delayed,
    belief_tick,
    schedule_delayed,
    simulate,
)
from .planner import (
    FailedConditionReport,
    PlanRequest,
    PlanResult,
    find_failed_condition,
    initial_tree,
    plan_request_from_domain,
    refine_tree,
    resolve_by_insert,
    resolve_threat,
    select_resolver,
)
from .rng import CounterRng, draw
from .status import Status
from .tree import (
    ActionNode,
    BTNode,
    Condition,
    ControlNode,
    Fallback,
    Sequence,
    Skipper,
    reset_latches,
    structurally_equal,
)
from .treefile import dumps_tree, load_tree, save_tree, tree_from_doc, tree_to_doc

__all__ = [
    "ActionInstance",
    "ActionNode",
    "BTNode",
    "BeliefState",
    "Condition",
    "ControlNode",
    "CounterRng",
    "DomainSpec",
    "ExecutionTrace",
    "FailedConditionReport",
    "Fallback",
    "GroundedDomain",
    "Outcome",
    "PhysicalState",
    "PlanRequest",
    "PlanResult",
    "Sequence",
    "SimulationLimits",
    "SimulationResult",
    "Skipper",
    "Status",
    "TemplateInstance",
    "apply_delayed",
    "belief_tick",
    "classic_tick",
    "draw",
    "dumps_tree",
    "find_failed_condition",
    "ground",
    "initial_tree",
    "instantiate_template",
    "load_tree",
    "parse_domain",
    "plan_request_from_domain",
    "refine_tree",
    "reset_latches",
    "resolve_by_insert",
    "resolve_threat",
    "run_classic",
    "save_tree",
    "schedule_delayed",
    "select_resolver",
    "serialize_domain",
    "simulate",
    "structurally_equal",
    "to_dot",
    "tree_from_doc",
    "tree_to_doc",
]
