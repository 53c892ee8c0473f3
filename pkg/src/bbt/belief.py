"""Belief states: finite discrete distributions over physical condition states.

Every operation here is functional: belief states and physical states are
immutable values, safe to share between threads and across simulations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping

from .errors import UnknownLiteral
from .status import Status

#: Comparison tolerance for probability mass under double arithmetic.
PROB_TOL = 1e-12


@dataclass(frozen=True)
class Outcome:
    """One probabilistic result of an action.

    ``postconditions`` are the literal assignments the outcome applies;
    ``report`` is the status the action replays once latched (S or F).
    """

    probability: float
    postconditions: tuple[tuple[str, Status], ...]
    report: Status


@dataclass(frozen=True)
class ActionInstance:
    """A grounded action: preconditions plus a distribution over outcomes."""

    id: str
    preconditions: tuple[tuple[str, Status], ...]
    outcomes: tuple[Outcome, ...]

    def __post_init__(self) -> None:
        total = sum(o.probability for o in self.outcomes)
        if abs(total - 1.0) > PROB_TOL:
            raise ValueError(f"outcome probabilities of {self.id!r} sum to {total!r}, not 1")


class PhysicalState:
    """An assignment of every grounded literal to a status, plus bookkeeping.

    ``r`` is the status last propagated to the root for this state.
    ``pending`` holds the single delayed action scheduled during the current
    root tick, as a ``(node id, ActionInstance)`` pair.  ``latches`` is this
    belief branch's view of which action nodes have finished and with what
    report status; branches forked by different outcomes legitimately
    diverge here, so latches take part in state identity.
    """

    __slots__ = ("assignment", "r", "pending", "latches", "_key", "_hash")

    def __init__(
        self,
        assignment: Mapping[str, Status],
        r: Status = Status.R,
        pending: tuple[int, ActionInstance] | None = None,
        latches: Mapping[int, Status] | None = None,
    ):
        self.assignment = dict(assignment)
        self.r = r
        self.pending = pending
        self.latches = dict(latches) if latches else {}
        pending_key = None if pending is None else (pending[0], pending[1].id)
        self._key = (
            tuple(sorted(self.assignment.items())),
            self.r,
            pending_key,
            tuple(sorted(self.latches.items())),
        )
        self._hash = hash(self._key)

    @property
    def key(self):
        """Canonical sort/equality key (assignment, r, pending, latches)."""
        return self._key

    def value(self, literal: str) -> Status:
        try:
            return self.assignment[literal]
        except KeyError:
            raise UnknownLiteral(literal) from None

    def with_r(self, r: Status) -> "PhysicalState":
        if r is self.r:
            return self
        return PhysicalState(self.assignment, r, self.pending, self.latches)

    def scheduled(self, node_id: int, action: ActionInstance) -> "PhysicalState":
        """Copy with ``action`` recorded as this tick's delayed action."""
        return PhysicalState(self.assignment, Status.R, (node_id, action), self.latches)

    def resolved(self, node_id: int, outcome: Outcome) -> "PhysicalState":
        """Copy with ``outcome`` applied, its latch set, and pending cleared."""
        assignment = dict(self.assignment)
        for literal, status in outcome.postconditions:
            if literal not in assignment:
                raise UnknownLiteral(literal)
            assignment[literal] = status
        latches = dict(self.latches)
        latches[node_id] = outcome.report
        return PhysicalState(assignment, self.r, None, latches)

    def assign(self, updates: Iterable[tuple[str, Status]]) -> "PhysicalState":
        assignment = dict(self.assignment)
        for literal, status in updates:
            if literal not in assignment:
                raise UnknownLiteral(literal)
            assignment[literal] = status
        return PhysicalState(assignment, self.r, self.pending, self.latches)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PhysicalState):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        body = ",".join(f"{k}={v}" for k, v in sorted(self.assignment.items()))
        pend = "-" if self.pending is None else self.pending[1].id
        return f"PhysicalState({body} | r={self.r} | pending={pend})"


class BeliefState:
    """A finite list of ``(probability, PhysicalState)`` entries.

    Probabilities are strictly positive and total mass is conserved by every
    operation; callers that prune must account for the dropped mass
    themselves (see :meth:`prune`).
    """

    __slots__ = ("entries",)

    def __init__(self, entries: Iterable[tuple[float, PhysicalState]] = ()):
        entries = tuple(entries)
        for p, _ in entries:
            if p <= 0.0:
                raise ValueError(f"belief entry with non-positive probability {p!r}")
        self.entries = entries

    @classmethod
    def point(cls, state: PhysicalState, probability: float = 1.0) -> "BeliefState":
        return cls([(probability, state)])

    @property
    def mass(self) -> float:
        return sum(p for p, _ in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[tuple[float, PhysicalState]]:
        return iter(self.entries)

    def __add__(self, other: "BeliefState") -> "BeliefState":
        return BeliefState(self.entries + other.entries)

    def eval_condition(self, literal: str) -> "BeliefState":
        """Set each entry's return status to its stored value of ``literal``."""
        return BeliefState((p, s.with_r(s.value(literal))) for p, s in self.entries)

    def apply_outcomes(self, action: ActionInstance) -> "BeliefState":
        """Expand every entry over the action's outcomes and coalesce.

        Return statuses are left untouched; scheduling and latching are the
        caller's business (the delayed pipeline in :mod:`bbt.engine`).
        """
        expanded = []
        for p, s in self.entries:
            for outcome in action.outcomes:
                if outcome.probability <= 0.0:
                    continue
                expanded.append((p * outcome.probability, s.assign(outcome.postconditions)))
        return BeliefState(expanded).coalesce()

    def split_by(
        self, predicate: Callable[[PhysicalState], bool]
    ) -> tuple["BeliefState", "BeliefState"]:
        """Partition into (entries satisfying predicate, the rest), order kept."""
        yes, no = [], []
        for p, s in self.entries:
            (yes if predicate(s) else no).append((p, s))
        return BeliefState(yes), BeliefState(no)

    def coalesce(self) -> "BeliefState":
        """Merge identical states, summing probability, in canonical order."""
        merged: dict[PhysicalState, float] = {}
        for p, s in self.entries:
            merged[s] = merged.get(s, 0.0) + p
        return BeliefState(
            (p, s) for s, p in sorted(merged.items(), key=lambda item: item[0].key)
        )

    def prune(self, epsilon: float) -> tuple["BeliefState", float]:
        """Drop entries below ``epsilon`` and report the dropped mass.

        The remainder is never renormalized, so success probabilities stay
        sound lower bounds.
        """
        kept, dropped = [], 0.0
        for p, s in self.entries:
            if p < epsilon:
                dropped += p
            else:
                kept.append((p, s))
        return BeliefState(kept), dropped

    def success_probability(self) -> float:
        return sum(p for p, s in self.entries if s.r is Status.S)

    def debug_lines(self) -> list[str]:
        """Canonical text dump, one ``p | literals | r | pending`` line per entry."""
        lines = []
        for p, s in self.coalesce().entries:
            body = ",".join(f"{k}={v}" for k, v in sorted(s.assignment.items()))
            pend = "-" if s.pending is None else s.pending[1].id
            lines.append(f"{p!r} | {body} | r={s.r} | pending={pend}")
        return lines

    def __repr__(self) -> str:
        return f"BeliefState({len(self.entries)} entries, mass={self.mass:.6f})"
