import random

import pytest

from bbt.belief import ActionInstance, BeliefState, Outcome, PhysicalState
from bbt.classic import run_classic
from bbt.engine import (
    SimulationLimits,
    apply_delayed,
    belief_tick,
    schedule_delayed,
    simulate,
)
from bbt.errors import EntryLimitExceeded, NoPending, TickLimitExceeded
from bbt.rng import CounterRng
from bbt.status import Status
from bbt.tree import ActionNode, Condition, Fallback, Sequence, Skipper, reset_latches

import oracle
import randgen

S, F, R = Status.S, Status.F, Status.R
MASS_TOL = 1e-12


def state(r=R, latches=None, pending=None, **values):
    return PhysicalState(
        {k: Status(v) for k, v in values.items()}, r, pending=pending, latches=latches
    )


def detect(name="detect", literal="seen"):
    return ActionInstance(
        name,
        (),
        (Outcome(0.5, ((literal, S),), S), Outcome(0.5, ((literal, F),), F)),
    )


def sure(name="sure", post=(("x", S),), report=S):
    return ActionInstance(name, (), (Outcome(1.0, tuple(post), report),))


class TestBeliefTick:
    def test_sequence_hand_enumeration(self):
        # first entry fails at b, second at a; b never evaluated for the second
        tree = Sequence([Condition("a"), Condition("b")])
        m = BeliefState([(0.5, state(a="S", b="F")), (0.5, state(a="F", b="S"))])
        out = belief_tick(tree, m)
        assert all(s.r is F for _, s in out)
        assert out.mass == pytest.approx(1.0, abs=MASS_TOL)
        # the a=F entry stopped at child 0, so it is returned first
        assert [s.assignment["a"] for _, s in out] == [F, S]

    def test_fallback_first_child_success_leaves_rest_untouched(self):
        tree = Fallback([Condition("a"), Condition("missing")])
        m = BeliefState([(0.7, state(a="S", b="S")), (0.3, state(a="S", b="F"))])
        out = belief_tick(tree, m)
        assert all(s.r is S for _, s in out)
        assert len(out) == 2

    def test_skipper_schedules_behind_unknown(self):
        action = ActionNode(detect())
        tree = Skipper([Condition("seen"), Sequence([action])])
        out = belief_tick(tree, BeliefState.point(state(seen="R")))
        ((_, result),) = out.entries
        assert result.r is R
        assert result.pending is not None
        assert result.pending[1].id == "detect"

    def test_entry_limit(self):
        tree = Sequence([Condition("a")])
        m = BeliefState([(0.5, state(a="S")), (0.25, state(a="F")), (0.25, state(a="R"))])
        with pytest.raises(EntryLimitExceeded):
            belief_tick(tree, m, max_entries=2)


class TestScheduleDelayed:
    def test_fresh_entry_schedules(self):
        node = ActionNode(sure("goto(table1)", (("at", S),)))
        out = schedule_delayed(node, BeliefState.point(state(at="F")))
        ((_, s),) = out.entries
        assert s.r is R
        assert s.pending == (node.node_id, node.action)

    def test_latched_entry_replays(self):
        node = ActionNode(sure("goto"))
        m = BeliefState.point(state(at="F", latches={node.node_id: S}))
        ((_, s),) = schedule_delayed(node, m).entries
        assert s.r is S
        assert s.pending is None

    def test_second_action_same_tick_not_scheduled(self):
        first = ActionNode(detect())
        second = ActionNode(sure("other"))
        m = schedule_delayed(first, BeliefState.point(state(seen="R", x="F")))
        out = schedule_delayed(second, m)
        ((_, s),) = out.entries
        assert s.r is R
        assert s.pending[1].id == "detect"


class TestApplyDelayed:
    def test_detect_splits_and_latches(self):
        node = ActionNode(detect("detect(soda)"))
        m = schedule_delayed(node, BeliefState.point(state(seen="R")))
        out = apply_delayed(m)
        assert len(out) == 2
        for p, s in out.entries:
            assert p == pytest.approx(0.5, abs=MASS_TOL)
            assert s.pending is None
            assert s.latches[node.node_id] is s.assignment["seen"]

    def test_deterministic_outcome_single_entry(self):
        node = ActionNode(sure("light_on", (("lum", S),)))
        m = schedule_delayed(node, BeliefState.point(state(lum="F")))
        out = apply_delayed(m)
        ((p, s),) = out.entries
        assert p == pytest.approx(1.0, abs=MASS_TOL)
        assert s.assignment["lum"] is S
        assert s.latches[node.node_id] is S

    def test_entries_expand_independently(self):
        node_a = ActionNode(detect("d1", "x"))
        node_b = ActionNode(sure("s1", (("y", S),)))
        m = BeliefState(
            [
                (0.5, state(x="R", y="F", pending=(node_a.node_id, node_a.action))),
                (0.5, state(x="R", y="F", pending=(node_b.node_id, node_b.action))),
            ]
        )
        out = apply_delayed(m)
        masses = sorted(p for p, _ in out.entries)
        assert masses == [pytest.approx(0.25), pytest.approx(0.25), pytest.approx(0.5)]
        assert out.mass == pytest.approx(1.0, abs=MASS_TOL)

    def test_no_pending_raises(self):
        with pytest.raises(NoPending):
            apply_delayed(BeliefState.point(state(a="S")))


class TestSimulate:
    def test_single_condition(self):
        result = simulate(Sequence([Condition("seen")]), BeliefState.point(state(seen="S")))
        assert result.ticks_used == 1
        ((p, s),) = result.terminal.entries
        assert p == pytest.approx(1.0, abs=MASS_TOL)
        assert s.r is S

    def test_unknown_condition_settles_as_running(self):
        result = simulate(Sequence([Condition("seen")]), BeliefState.point(state(seen="R")))
        ((_, s),) = result.terminal.entries
        assert s.r is R
        assert result.terminal.success_probability() == 0

    def test_fixpoint_rule(self):
        # settled entries are unchanged by one more root tick
        rng = random.Random(11)
        for _ in range(30):
            literals = randgen.random_literals(rng)
            actions = randgen.random_actions(rng, literals)
            tree = randgen.random_tree(rng, literals, actions)
            initial = BeliefState.point(
                PhysicalState(randgen.random_assignment(rng, literals))
            )
            result = simulate(tree, initial)
            for p, s in result.terminal.entries:
                out = belief_tick(tree, BeliefState.point(s))
                ((_, again),) = out.entries
                assert again.pending is None
                assert again.assignment == s.assignment
                assert again.latches == s.latches
                assert again.r is s.r

    def test_termination_bound_all_latched(self):
        rng = random.Random(23)
        for _ in range(50):
            literals = randgen.random_literals(rng)
            actions = randgen.random_actions(rng, literals)
            tree = randgen.random_tree(rng, literals, actions)
            action_nodes = sum(1 for n in tree.iter_nodes() if isinstance(n, ActionNode))
            initial = BeliefState.point(
                PhysicalState(randgen.random_assignment(rng, literals))
            )
            result = simulate(tree, initial)
            assert result.ticks_used <= action_nodes + 1

    def test_mass_conservation(self):
        rng = random.Random(31)
        for _ in range(50):
            literals = randgen.random_literals(rng)
            actions = randgen.random_actions(rng, literals)
            tree = randgen.random_tree(rng, literals, actions)
            m = randgen.random_belief(rng, literals)
            assert belief_tick(tree, m).mass == pytest.approx(m.mass, abs=MASS_TOL)
            result = simulate(tree, m)
            assert result.terminal.mass + result.pruned_mass == pytest.approx(
                m.mass, abs=MASS_TOL
            )

    def test_matches_oracle_on_random_trees(self):
        rng = random.Random(47)
        for _ in range(60):
            literals = randgen.random_literals(rng)
            actions = randgen.random_actions(rng, literals)
            tree = randgen.random_tree(rng, literals, actions)
            assignment = randgen.random_assignment(rng, literals)
            expected = oracle.enumerate_terminals(tree, assignment)
            result = simulate(tree, BeliefState.point(PhysicalState(assignment)))
            oracle.assert_distributions_match(
                expected, oracle.simulation_to_terminals(result)
            )

    def test_singleton_deterministic_equals_classic(self):
        rng = random.Random(59)
        for _ in range(100):
            literals = randgen.random_literals(rng)
            actions = randgen.random_actions(rng, literals, deterministic=True)
            tree = randgen.random_tree(rng, literals, actions)
            assignment = randgen.random_assignment(rng, literals)
            result = simulate(tree, BeliefState.point(PhysicalState(assignment)))
            ((_, terminal),) = result.terminal.entries
            reset_latches(tree)
            status, _ = run_classic(tree, dict(assignment), CounterRng(1))
            assert terminal.r is status

    def test_monte_carlo_agreement_on_stochastic_tree(self):
        rng = random.Random(61)
        literals = ["a", "b", "c"]
        actions = randgen.random_actions(rng, literals, max_actions=3)
        tree = Fallback(
            [
                Sequence([Condition("a"), ActionNode(actions[0])]),
                Skipper([Condition("b"), Sequence([ActionNode(actions[-1])])]),
            ]
        )
        assignment = {"a": F, "b": R, "c": F}
        analytical = simulate(
            tree, BeliefState.point(PhysicalState(assignment))
        ).terminal.success_probability()
        n = 20000
        hits = 0
        for i in range(n):
            reset_latches(tree)
            status, _ = run_classic(tree, dict(assignment), CounterRng(99, i))
            hits += status is S
        rate = hits / n
        bound = 3 * (max(analytical * (1 - analytical), 1e-9) / n) ** 0.5
        assert abs(rate - analytical) <= max(bound, 1e-9) + 3e-3

    def test_tick_limit(self):
        action = ActionNode(detect())
        tree = Skipper([Condition("seen"), Sequence([action])])
        with pytest.raises(TickLimitExceeded):
            simulate(
                tree,
                BeliefState.point(state(seen="R")),
                SimulationLimits(max_root_ticks=1),
            )

    def test_entry_limit_on_expansion(self):
        actions = [detect(f"d{i}", lit) for i, lit in enumerate(("a", "b", "c"))]
        tree = Sequence(
            [Skipper([Condition(lit), Sequence([ActionNode(act)])]) for lit, act in zip(("a", "b", "c"), actions)]
        )
        with pytest.raises(EntryLimitExceeded):
            simulate(
                tree,
                BeliefState.point(state(a="R", b="R", c="R")),
                SimulationLimits(max_entries=1),
            )

    def test_prune_epsilon_reports_unresolved_mass(self):
        action = ActionNode(
            ActionInstance(
                "skew", (), (Outcome(0.9375, (("a", S),), S), Outcome(0.0625, (("a", F),), F))
            )
        )
        tree = Fallback([Condition("a"), Sequence([action])])
        result = simulate(
            tree,
            BeliefState.point(state(a="F")),
            SimulationLimits(prune_epsilon=0.1),
        )
        assert result.pruned_mass == pytest.approx(0.0625, abs=MASS_TOL)
        assert result.terminal.mass == pytest.approx(0.9375, abs=MASS_TOL)

    def test_mass_flow_log(self):
        action = ActionNode(detect())
        tree = Skipper([Condition("seen"), Sequence([action])])
        result = simulate(tree, BeliefState.point(state(seen="R")), record_flow=True)
        assert result.mass_flow
        assert result.mass_flow[0].startswith("tick 1 ")
