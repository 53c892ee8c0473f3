"""The domain-definition language: parsing, validation, grounding, templates.

A domain file declares parameter spaces, condition schemas (with their
allowed status values), action schemas (preconditions plus a probabilistic
outcome list), node templates (parameterized subtrees with advisory declared
outcomes), an initial assignment, and a goal with a target probability.
Grounding expands every schema over the cartesian product of its parameter
spaces into literal-level objects.

Format by example::

    param place { table1 table2 }
    condition at(place) values { S F }
    action goto(place) {
      pre { }
      outcome 0.95 -> S { at(place) = S }
      outcome 0.05 -> F { }
    }
    template find(object) {
      pre { seen(object) = F }
      declared 0.8 { seen(object) = S }
      declared 0.2 { seen(object) = F }
      body fb { seq { act goto(table1) act detect(object) } ... }
    }
    initial { at(table1) = F }
    goal { seen(soda) = S } prob 0.9

Parameter names in signatures are the names of parameter spaces; inside a
schema an argument is either such a parameter or a concrete instance of the
space expected at that position.  ``#`` starts a comment.
"""

from __future__ import annotations

import itertools
import logging
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Union

from .belief import ActionInstance, BeliefState, Outcome, PhysicalState
from .errors import ParseError, SemanticError, UnboundParameter
from .status import Status
from .tree import ActionNode, BTNode, Condition, CONTROL_KINDS

log = logging.getLogger(__name__)

PROB_SUM_TOL = 1e-9

Loc = tuple[int, int]
_NO_LOC: Loc = (0, 0)


# ---------------------------------------------------------------------------
# Parsed representation


@dataclass(frozen=True)
class Assignment:
    """``name(args) = value`` — a condition reference paired with a status."""

    name: str
    args: tuple[str, ...]
    value: Status
    loc: Loc = field(default=_NO_LOC, compare=False, repr=False)


@dataclass(frozen=True)
class OutcomeSpec:
    """One outcome clause; ``report`` is None when left to the default rule."""

    probability: float
    report: Status | None
    assignments: tuple[Assignment, ...]
    loc: Loc = field(default=_NO_LOC, compare=False, repr=False)


@dataclass(frozen=True)
class ParamSpace:
    name: str
    instances: tuple[str, ...]
    loc: Loc = field(default=_NO_LOC, compare=False, repr=False)


@dataclass(frozen=True)
class ConditionSchema:
    name: str
    params: tuple[str, ...]
    values: tuple[Status, ...]
    loc: Loc = field(default=_NO_LOC, compare=False, repr=False)


@dataclass(frozen=True)
class ActionSchema:
    name: str
    params: tuple[str, ...]
    preconditions: tuple[Assignment, ...]
    outcomes: tuple[OutcomeSpec, ...]
    loc: Loc = field(default=_NO_LOC, compare=False, repr=False)


@dataclass(frozen=True)
class BodyControl:
    op: str  # "seq" | "fb" | "skip"
    children: tuple["BodyExpr", ...]


@dataclass(frozen=True)
class BodyLeaf:
    ref: str  # "act" | "cond" | "tmpl"
    name: str
    args: tuple[str, ...]
    loc: Loc = field(default=_NO_LOC, compare=False, repr=False)


BodyExpr = Union[BodyControl, BodyLeaf]


@dataclass(frozen=True)
class TemplateSchema:
    name: str
    params: tuple[str, ...]
    preconditions: tuple[Assignment, ...]
    declared: tuple[OutcomeSpec, ...]
    body: BodyExpr
    loc: Loc = field(default=_NO_LOC, compare=False, repr=False)


@dataclass(frozen=True)
class DomainSpec:
    params: tuple[ParamSpace, ...] = ()
    conditions: tuple[ConditionSchema, ...] = ()
    actions: tuple[ActionSchema, ...] = ()
    templates: tuple[TemplateSchema, ...] = ()
    initial: tuple[Assignment, ...] = ()
    goal: tuple[Assignment, ...] = ()
    goal_probability: float | None = None


# ---------------------------------------------------------------------------
# Tokenizer


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>\#[^\n]*)
  | (?P<number>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>->|[{}(),;=])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "name" | "number" | "punct" | "eof"
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        chunk = m.group()
        if kind in ("ws", "comment"):
            newlines = chunk.count("\n")
            if newlines:
                line += newlines
                line_start = m.start() + chunk.rindex("\n") + 1
        else:
            tokens.append(Token(kind, chunk, line, m.start() - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, len(text) - line_start + 1))
    return tokens


# ---------------------------------------------------------------------------
# Recursive-descent parser


_DECL_KEYWORDS = ("param", "condition", "action", "template", "initial", "goal")
_BODY_KEYWORDS = ("seq", "fb", "skip", "act", "cond", "tmpl")


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        if token.kind != "eof":
            self.pos += 1
        return token

    def error(self, message: str, *expected: str) -> ParseError:
        token = self.peek()
        found = token.text if token.kind != "eof" else "end of input"
        return ParseError(f"{message}, found {found!r}", token.line, token.col, expected)

    def expect(self, text: str) -> Token:
        token = self.peek()
        if token.text != text or token.kind == "eof":
            raise self.error(f"expected {text!r}", text)
        return self.advance()

    def expect_name(self, what: str = "a name") -> Token:
        token = self.peek()
        if token.kind != "name":
            raise self.error(f"expected {what}", "NAME")
        return self.advance()

    def expect_number(self) -> tuple[float, Token]:
        token = self.peek()
        if token.kind != "number":
            raise self.error("expected a number", "NUMBER")
        self.advance()
        return float(token.text), token

    def expect_value(self) -> Status:
        token = self.peek()
        if token.kind != "name" or token.text not in ("S", "F", "R"):
            raise self.error("expected a status value", "S", "F", "R")
        self.advance()
        return Status(token.text)

    def at(self, text: str) -> bool:
        token = self.peek()
        return token.kind != "eof" and token.text == text

    # -- grammar productions

    def parse_file(self) -> DomainSpec:
        params, conditions, actions, templates = [], [], [], []
        initial: tuple[Assignment, ...] | None = None
        goal: tuple[tuple[Assignment, ...], float] | None = None
        while self.peek().kind != "eof":
            token = self.peek()
            if token.text == "param":
                params.append(self.parse_param())
            elif token.text == "condition":
                conditions.append(self.parse_condition())
            elif token.text == "action":
                actions.append(self.parse_action())
            elif token.text == "template":
                templates.append(self.parse_template())
            elif token.text == "initial":
                if initial is not None:
                    raise SemanticError("duplicate initial section", token.line, token.col)
                self.advance()
                initial = self.parse_asgnset()
            elif token.text == "goal":
                if goal is not None:
                    raise SemanticError("duplicate goal section", token.line, token.col)
                self.advance()
                goal_set = self.parse_asgnset()
                self.expect("prob")
                prob, _ = self.expect_number()
                goal = (goal_set, prob)
            else:
                raise self.error("expected a declaration", *_DECL_KEYWORDS)
        return DomainSpec(
            params=tuple(params),
            conditions=tuple(conditions),
            actions=tuple(actions),
            templates=tuple(templates),
            initial=initial or (),
            goal=goal[0] if goal else (),
            goal_probability=goal[1] if goal else None,
        )

    def parse_param(self) -> ParamSpace:
        start = self.expect("param")
        name = self.expect_name("a parameter space name")
        self.expect("{")
        instances = [self.expect_name("an instance name").text]
        while not self.at("}"):
            instances.append(self.expect_name("an instance name").text)
        self.expect("}")
        return ParamSpace(name.text, tuple(instances), (start.line, start.col))

    def parse_signature(self) -> tuple[str, ...]:
        if not self.at("("):
            return ()
        self.expect("(")
        params = [self.expect_name("a parameter name").text]
        while self.at(","):
            self.advance()
            params.append(self.expect_name("a parameter name").text)
        self.expect(")")
        return tuple(params)

    def parse_condition(self) -> ConditionSchema:
        start = self.expect("condition")
        name = self.expect_name("a condition name")
        params = self.parse_signature()
        self.expect("values")
        self.expect("{")
        values = [self.expect_value()]
        while not self.at("}"):
            values.append(self.expect_value())
        self.expect("}")
        return ConditionSchema(name.text, params, tuple(values), (start.line, start.col))

    def parse_args(self) -> tuple[str, ...]:
        self.expect("(")
        if self.at(")"):
            self.advance()
            return ()
        args = [self.expect_name("an argument").text]
        while self.at(","):
            self.advance()
            args.append(self.expect_name("an argument").text)
        self.expect(")")
        return tuple(args)

    def parse_asgn(self) -> Assignment:
        name = self.expect_name("a condition name")
        args = self.parse_args() if self.at("(") else ()
        self.expect("=")
        value = self.expect_value()
        return Assignment(name.text, args, value, (name.line, name.col))

    def parse_asgnset(self) -> tuple[Assignment, ...]:
        self.expect("{")
        if self.at("}"):
            self.advance()
            return ()
        assignments = [self.parse_asgn()]
        while self.at(";"):
            self.advance()
            assignments.append(self.parse_asgn())
        self.expect("}")
        return tuple(assignments)

    def parse_outcome(self) -> OutcomeSpec:
        start = self.expect("outcome")
        probability, _ = self.expect_number()
        report = None
        if self.at("->"):
            self.advance()
            report = self.expect_value()
        assignments = self.parse_asgnset()
        return OutcomeSpec(probability, report, assignments, (start.line, start.col))

    def parse_action(self) -> ActionSchema:
        start = self.expect("action")
        name = self.expect_name("an action name")
        params = self.parse_signature()
        self.expect("{")
        self.expect("pre")
        preconditions = self.parse_asgnset()
        outcomes = []
        while self.at("outcome"):
            outcomes.append(self.parse_outcome())
        self.expect("}")
        return ActionSchema(
            name.text, params, preconditions, tuple(outcomes), (start.line, start.col)
        )

    def parse_template(self) -> TemplateSchema:
        start = self.expect("template")
        name = self.expect_name("a template name")
        self.expect("(")
        params = [self.expect_name("a parameter name").text]
        while self.at(","):
            self.advance()
            params.append(self.expect_name("a parameter name").text)
        self.expect(")")
        self.expect("{")
        self.expect("pre")
        preconditions = self.parse_asgnset()
        declared = []
        while self.at("declared"):
            decl = self.advance()
            probability, _ = self.expect_number()
            assignments = self.parse_asgnset()
            declared.append(OutcomeSpec(probability, None, assignments, (decl.line, decl.col)))
        self.expect("body")
        body = self.parse_btexpr()
        self.expect("}")
        return TemplateSchema(
            name.text,
            tuple(params),
            preconditions,
            tuple(declared),
            body,
            (start.line, start.col),
        )

    def parse_btexpr(self) -> BodyExpr:
        token = self.peek()
        if token.text in ("seq", "fb", "skip"):
            self.advance()
            self.expect("{")
            children = [self.parse_btexpr()]
            while not self.at("}"):
                children.append(self.parse_btexpr())
            self.expect("}")
            return BodyControl(token.text, tuple(children))
        if token.text in ("act", "cond", "tmpl"):
            self.advance()
            name = self.expect_name("a referenced name")
            args = self.parse_args()
            return BodyLeaf(token.text, name.text, args, (token.line, token.col))
        raise self.error("expected a tree expression", *_BODY_KEYWORDS)


# ---------------------------------------------------------------------------
# Validation


def _check_duplicates(names: Iterable[tuple[str, Loc]], what: str) -> None:
    seen: dict[str, Loc] = {}
    for name, loc in names:
        if name in seen:
            raise SemanticError(f"duplicate {what} {name!r}", *loc)
        seen[name] = loc


def _validate_reference(
    spec: DomainSpec,
    spaces: dict[str, ParamSpace],
    enclosing_params: tuple[str, ...],
    signature: tuple[str, ...],
    name: str,
    args: tuple[str, ...],
    loc: Loc,
) -> None:
    """Check one ``name(args)`` reference against the target's signature."""
    if len(args) != len(signature):
        raise SemanticError(
            f"{name!r} takes {len(signature)} argument(s), got {len(args)}", *loc
        )
    for arg, space_name in zip(args, signature):
        if arg in enclosing_params:
            if arg != space_name:
                raise SemanticError(
                    f"argument {arg!r} of {name!r} must range over space {space_name!r}", *loc
                )
        elif arg not in spaces[space_name].instances:
            raise SemanticError(
                f"{arg!r} is neither a parameter here nor an instance of {space_name!r}", *loc
            )


def _validate_assignments(
    spec: DomainSpec,
    spaces: dict[str, ParamSpace],
    conditions: dict[str, ConditionSchema],
    assignments: tuple[Assignment, ...],
    enclosing_params: tuple[str, ...],
    context: str,
) -> None:
    for asgn in assignments:
        schema = conditions.get(asgn.name)
        if schema is None:
            raise SemanticError(f"unknown condition {asgn.name!r} in {context}", *asgn.loc)
        _validate_reference(
            spec, spaces, enclosing_params, schema.params, asgn.name, asgn.args, asgn.loc
        )
        if asgn.value not in schema.values:
            raise SemanticError(
                f"condition {asgn.name!r} cannot hold value {asgn.value}", *asgn.loc
            )


def _validate_signature_spaces(
    spaces: dict[str, ParamSpace], params: tuple[str, ...], owner: str, loc: Loc
) -> None:
    for p in params:
        if p not in spaces:
            raise SemanticError(f"{owner} references unknown parameter space {p!r}", *loc)
    if len(set(params)) != len(params):
        raise SemanticError(f"{owner} repeats a parameter space in its signature", *loc)


def _validate_outcomes(
    outcomes: tuple[OutcomeSpec, ...], owner: str, loc: Loc, what: str = "outcome"
) -> None:
    if not outcomes:
        return
    for outcome in outcomes:
        if outcome.probability <= 0.0:
            raise SemanticError(
                f"{what} probability of {owner} must be positive", *outcome.loc
            )
        if outcome.report is Status.R:
            raise SemanticError(f"{what} report status of {owner} must be S or F", *outcome.loc)
    total = sum(o.probability for o in outcomes)
    if abs(total - 1.0) > PROB_SUM_TOL:
        raise SemanticError(f"{what} probabilities of {owner} sum to {total:.6g}, not 1", *loc)


def validate_domain(spec: DomainSpec) -> None:
    """Raise :class:`SemanticError` on the first well-formedness violation."""
    _check_duplicates(((p.name, p.loc) for p in spec.params), "parameter space")
    _check_duplicates(((c.name, c.loc) for c in spec.conditions), "condition")
    _check_duplicates(
        itertools.chain(
            ((a.name, a.loc) for a in spec.actions),
            ((t.name, t.loc) for t in spec.templates),
        ),
        "action or template",
    )
    spaces = {p.name: p for p in spec.params}
    conditions = {c.name: c for c in spec.conditions}
    actions = {a.name: a for a in spec.actions}
    templates = {t.name: t for t in spec.templates}

    for cond in spec.conditions:
        _validate_signature_spaces(spaces, cond.params, f"condition {cond.name!r}", cond.loc)

    for action in spec.actions:
        _validate_signature_spaces(spaces, action.params, f"action {action.name!r}", action.loc)
        _validate_assignments(
            spec, spaces, conditions, action.preconditions, action.params,
            f"preconditions of {action.name!r}",
        )
        if not action.outcomes:
            raise SemanticError(f"action {action.name!r} declares no outcomes", *action.loc)
        _validate_outcomes(action.outcomes, f"action {action.name!r}", action.loc)
        for outcome in action.outcomes:
            _validate_assignments(
                spec, spaces, conditions, outcome.assignments, action.params,
                f"outcome of {action.name!r}",
            )

    for template in spec.templates:
        _validate_signature_spaces(
            spaces, template.params, f"template {template.name!r}", template.loc
        )
        _validate_assignments(
            spec, spaces, conditions, template.preconditions, template.params,
            f"preconditions of {template.name!r}",
        )
        _validate_outcomes(
            template.declared, f"template {template.name!r}", template.loc, "declared"
        )
        for outcome in template.declared:
            _validate_assignments(
                spec, spaces, conditions, outcome.assignments, template.params,
                f"declared outcome of {template.name!r}",
            )
    # bodies may reference templates declared later, so validate them after
    # every signature is known
    for template in spec.templates:
        _validate_body(spec, spaces, conditions, actions, templates, template)

    _check_template_cycles(templates)

    _validate_assignments(spec, spaces, conditions, spec.initial, (), "initial state")
    _check_duplicates(
        ((format_literal(a.name, a.args), a.loc) for a in spec.initial), "initial assignment"
    )
    _validate_assignments(spec, spaces, conditions, spec.goal, (), "goal")
    for asgn in spec.goal:
        if asgn.value is not Status.S:
            raise SemanticError("goal conditions must require value S", *asgn.loc)
    if spec.goal_probability is not None and not 0.0 < spec.goal_probability <= 1.0:
        raise SemanticError(f"goal probability {spec.goal_probability!r} not in (0, 1]")


def _validate_body(
    spec: DomainSpec,
    spaces: dict[str, ParamSpace],
    conditions: dict[str, ConditionSchema],
    actions: dict[str, ActionSchema],
    templates: dict[str, TemplateSchema],
    template: TemplateSchema,
) -> None:
    def walk(expr: BodyExpr) -> None:
        if isinstance(expr, BodyControl):
            for child in expr.children:
                walk(child)
            return
        if expr.ref == "act":
            target = actions.get(expr.name)
        elif expr.ref == "cond":
            target = conditions.get(expr.name)
        else:
            target = templates.get(expr.name)
        if target is None:
            raise SemanticError(
                f"body of {template.name!r} references unknown {expr.ref} {expr.name!r}",
                *expr.loc,
            )
        _validate_reference(
            spec, spaces, template.params, target.params, expr.name, expr.args, expr.loc
        )

    walk(template.body)


def _check_template_cycles(templates: dict[str, TemplateSchema]) -> None:
    def refs(expr: BodyExpr) -> Iterator[str]:
        if isinstance(expr, BodyControl):
            for child in expr.children:
                yield from refs(child)
        elif expr.ref == "tmpl":
            yield expr.name

    visiting: set[str] = set()
    done: set[str] = set()

    def visit(name: str) -> None:
        if name in done:
            return
        if name in visiting:
            raise SemanticError(f"template {name!r} expands into itself")
        visiting.add(name)
        for ref in refs(templates[name].body):
            visit(ref)
        visiting.discard(name)
        done.add(name)

    for name in templates:
        visit(name)


def parse_domain(text: str) -> DomainSpec:
    """Parse and validate domain text, with line/column diagnostics."""
    spec = _Parser(_tokenize(text)).parse_file()
    validate_domain(spec)
    return spec


# ---------------------------------------------------------------------------
# Serialization (canonical text; parse -> serialize -> parse is the identity)


def _fmt_number(x: float) -> str:
    return repr(float(x))


def _fmt_asgn(asgn: Assignment) -> str:
    return f"{format_literal(asgn.name, asgn.args)} = {asgn.value}"


def _fmt_asgnset(assignments: tuple[Assignment, ...]) -> str:
    if not assignments:
        return "{ }"
    return "{ " + " ; ".join(_fmt_asgn(a) for a in assignments) + " }"


def _fmt_body(expr: BodyExpr, indent: int) -> list[str]:
    pad = "  " * indent
    if isinstance(expr, BodyLeaf):
        return [f"{pad}{expr.ref} {expr.name}({', '.join(expr.args)})"]
    lines = [f"{pad}{expr.op} {{"]
    for child in expr.children:
        lines.extend(_fmt_body(child, indent + 1))
    lines.append(f"{pad}}}")
    return lines


def serialize_domain(spec: DomainSpec) -> str:
    """Render a spec back to canonical domain text."""
    out: list[str] = []
    for space in spec.params:
        out.append(f"param {space.name} {{ {' '.join(space.instances)} }}")
    if spec.params:
        out.append("")
    for cond in spec.conditions:
        sig = f"({', '.join(cond.params)})" if cond.params else ""
        values = " ".join(str(v) for v in cond.values)
        out.append(f"condition {cond.name}{sig} values {{ {values} }}")
    if spec.conditions:
        out.append("")
    for action in spec.actions:
        sig = f"({', '.join(action.params)})" if action.params else ""
        out.append(f"action {action.name}{sig} {{")
        out.append(f"  pre {_fmt_asgnset(action.preconditions)}")
        for outcome in action.outcomes:
            report = f" -> {outcome.report}" if outcome.report is not None else ""
            out.append(
                f"  outcome {_fmt_number(outcome.probability)}{report} "
                f"{_fmt_asgnset(outcome.assignments)}"
            )
        out.append("}")
        out.append("")
    for template in spec.templates:
        out.append(f"template {template.name}({', '.join(template.params)}) {{")
        out.append(f"  pre {_fmt_asgnset(template.preconditions)}")
        for outcome in template.declared:
            out.append(
                f"  declared {_fmt_number(outcome.probability)} "
                f"{_fmt_asgnset(outcome.assignments)}"
            )
        body_lines = _fmt_body(template.body, 1)
        out.append("  body " + body_lines[0].strip())
        out.extend(body_lines[1:])
        out.append("}")
        out.append("")
    if spec.initial:
        out.append(f"initial {_fmt_asgnset(spec.initial)}")
    if spec.goal or spec.goal_probability is not None:
        out.append(
            f"goal {_fmt_asgnset(spec.goal)} prob {_fmt_number(spec.goal_probability or 1.0)}"
        )
    return "\n".join(out).rstrip("\n") + "\n"


# ---------------------------------------------------------------------------
# Grounding


def format_literal(name: str, args: tuple[str, ...]) -> str:
    return f"{name}({','.join(args)})" if args else name


@dataclass(frozen=True)
class TemplateInstance:
    """A grounded template: advisory outcome distribution plus a body factory."""

    id: str
    preconditions: tuple[tuple[str, Status], ...]
    declared: tuple[Outcome, ...]
    schema: TemplateSchema = field(compare=False, repr=False)
    bindings: tuple[tuple[str, str], ...] = field(compare=False, repr=False)
    domain: "GroundedDomain" = field(compare=False, repr=False)

    def instantiate(self) -> BTNode:
        """Build a fresh subtree; repeated calls share structure, not latches."""
        return _expand_body(self.domain, self.schema, dict(self.bindings))


class GroundedDomain:
    """Literal-level view of a validated spec.

    Immutable after construction; grounding order is deterministic
    (declaration order crossed with instance-list order).
    """

    def __init__(self, spec: DomainSpec):
        self.spec = spec
        self._spaces = {p.name: p.instances for p in spec.params}
        self._condition_schemas = {c.name: c for c in spec.conditions}
        self._action_schemas = {a.name: a for a in spec.actions}
        self._template_schemas = {t.name: t for t in spec.templates}

        self.literals: tuple[str, ...] = ()
        self.allowed_values: dict[str, tuple[Status, ...]] = {}
        literals = []
        for cond in spec.conditions:
            for binding in self._bindings(cond.params, cond.name):
                literal = format_literal(cond.name, tuple(binding[p] for p in cond.params))
                literals.append(literal)
                self.allowed_values[literal] = cond.values
        self.literals = tuple(literals)

        self.actions: tuple[ActionInstance, ...] = tuple(
            self._ground_action(a, binding)
            for a in spec.actions
            for binding in self._bindings(a.params, a.name)
        )
        self.actions_by_id = {a.id: a for a in self.actions}

        self.templates: tuple[TemplateInstance, ...] = tuple(
            self._ground_template(t, binding)
            for t in spec.templates
            for binding in self._bindings(t.params, t.name)
        )
        self.templates_by_id = {t.id: t for t in self.templates}

        self._assignable = {
            (literal, status)
            for resolver in itertools.chain(self.actions, self.templates)
            for outcome in resolver_outcomes(resolver)
            for literal, status in outcome.postconditions
        }

        self.goal: tuple[tuple[str, Status], ...] = tuple(
            (self._ground_asgn(a, {})[0], a.value) for a in spec.goal
        )
        self.goal_probability = spec.goal_probability
        self.initial_assignment = self._build_initial()

    # -- construction helpers

    def _bindings(self, params: tuple[str, ...], owner: str) -> Iterator[dict[str, str]]:
        spaces = []
        for p in params:
            instances = self._spaces[p]
            if not instances:
                log.warning("parameter space %r is empty; %r grounds to nothing", p, owner)
            spaces.append(instances)
        for combo in itertools.product(*spaces):
            yield dict(zip(params, combo))

    def _ground_asgn(self, asgn: Assignment, binding: Mapping[str, str]) -> tuple[str, Status]:
        args = tuple(binding.get(a, a) for a in asgn.args)
        return format_literal(asgn.name, args), asgn.value

    def _report_status(self, outcome: OutcomeSpec) -> Status:
        if outcome.report is not None:
            return outcome.report
        # default: an outcome that establishes something counts as a success
        if any(a.value is Status.S for a in outcome.assignments):
            return Status.S
        return Status.F

    def _ground_action(self, schema: ActionSchema, binding: dict[str, str]) -> ActionInstance:
        name = format_literal(schema.name, tuple(binding[p] for p in schema.params))
        outcomes = []
        for spec_outcome in schema.outcomes:
            post = tuple(self._ground_asgn(a, binding) for a in spec_outcome.assignments)
            outcomes.append(
                Outcome(spec_outcome.probability, post, self._report_status(spec_outcome))
            )
        total = sum(o.probability for o in outcomes)
        if abs(total - 1.0) > PROB_SUM_TOL:
            raise SemanticError(f"outcome probabilities of {name} sum to {total:.6g}")
        if abs(total - 1.0) > 1e-12:
            # tolerated by the parser; rescale so downstream mass checks hold
            outcomes = [
                Outcome(o.probability / total, o.postconditions, o.report) for o in outcomes
            ]
        return ActionInstance(
            id=name,
            preconditions=tuple(self._ground_asgn(a, binding) for a in schema.preconditions),
            outcomes=tuple(outcomes),
        )

    def _ground_template(
        self, schema: TemplateSchema, binding: dict[str, str]
    ) -> TemplateInstance:
        name = format_literal(schema.name, tuple(binding[p] for p in schema.params))
        declared = tuple(
            Outcome(
                o.probability,
                tuple(self._ground_asgn(a, binding) for a in o.assignments),
                self._report_status(o),
            )
            for o in schema.declared
        )
        return TemplateInstance(
            id=name,
            preconditions=tuple(self._ground_asgn(a, binding) for a in schema.preconditions),
            declared=declared,
            schema=schema,
            bindings=tuple(binding.items()),
            domain=self,
        )

    def _build_initial(self) -> dict[str, Status]:
        # unassigned literals default to unknown when the condition allows it
        assignment = {}
        for literal in self.literals:
            values = self.allowed_values[literal]
            assignment[literal] = Status.R if Status.R in values else Status.F
        for asgn in self.spec.initial:
            literal, value = self._ground_asgn(asgn, {})
            assignment[literal] = value
        return assignment

    # -- public surface

    def initial_belief(self) -> BeliefState:
        """The declared initial state as a point distribution."""
        return BeliefState.point(PhysicalState(self.initial_assignment))

    def resolvers(self) -> tuple[ActionInstance | TemplateInstance, ...]:
        return self.actions + self.templates

    def assignable(self, literal: str, value: Status) -> bool:
        """True if some action or template outcome sets ``literal`` to ``value``."""
        return (literal, value) in self._assignable


def resolver_outcomes(resolver: ActionInstance | TemplateInstance) -> tuple[Outcome, ...]:
    if isinstance(resolver, ActionInstance):
        return resolver.outcomes
    return resolver.declared


def ground(spec: DomainSpec) -> GroundedDomain:
    """Expand a validated spec over its parameter spaces."""
    return GroundedDomain(spec)


def _expand_body(
    domain: GroundedDomain, schema: TemplateSchema, binding: dict[str, str]
) -> BTNode:
    def resolve_args(args: tuple[str, ...]) -> tuple[str, ...]:
        return tuple(binding.get(a, a) for a in args)

    def walk(expr: BodyExpr) -> BTNode:
        if isinstance(expr, BodyControl):
            op = {"seq": "sequence", "fb": "fallback", "skip": "skipper"}[expr.op]
            return CONTROL_KINDS[op]([walk(c) for c in expr.children])
        args = resolve_args(expr.args)
        name = format_literal(expr.name, args)
        if expr.ref == "act":
            return ActionNode(domain.actions_by_id[name])
        if expr.ref == "cond":
            return Condition(name)
        inner = domain._template_schemas[expr.name]
        return _expand_body(domain, inner, dict(zip(inner.params, args)))

    return walk(schema.body)


def instantiate_template(
    domain: GroundedDomain, template_name: str, bindings: Mapping[str, str]
) -> BTNode:
    """Instantiate a template schema under explicit parameter bindings."""
    schema = domain._template_schemas.get(template_name)
    if schema is None:
        raise SemanticError(f"unknown template {template_name!r}")
    for param in schema.params:
        if param not in bindings:
            raise UnboundParameter(template_name, param)
        if bindings[param] not in domain._spaces[param]:
            raise SemanticError(
                f"{bindings[param]!r} is not an instance of space {param!r}"
            )
    return _expand_body(domain, schema, {p: bindings[p] for p in schema.params})
