"""Agent system specifications: data model, validation, and the .bdg format.

A specification bundles, per agent: decision atoms, facts, belief rules,
desire rules, a priority order over the agent's own desires, and an initial
decision (a literal set the agent is already committed to).  World atoms are
shared.  Decision-atom sets are pairwise disjoint and disjoint from world
atoms; priorities never span agents.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property

from .errors import (BdgameError, SpecSyntaxError)
from .extension import Rule
from .logic import (DEFAULT_MAX_ATOMS, Atom, Formula, Literal, Vocabulary,
                    consistent, consistent_literals, format_formula,
                    in_sublanguage, literal_sort_key, parse_formula,
                    parse_literal)


class DecisionMode(str, Enum):
    """Shape of the candidate decision space of each agent.

    positive-subsets: any subset of positive literals
    total-assignments: exactly one literal per decision atom
    literal-subsets: any consistent literal subset
    """

    POSITIVE_SUBSETS = "positive-subsets"
    TOTAL_ASSIGNMENTS = "total-assignments"
    LITERAL_SUBSETS = "literal-subsets"


RANKED = "ranked"
IDENTITY = "identity"


@dataclass(frozen=True)
class PriorityOrder:
    """Priority over one agent's desire rules.

    ``ranked``: an injective rank per desire rule; higher rank means higher
    priority, and distinct ranks give a strict total order.  ``identity``:
    no rule outranks another (d >= d' only when d = d').
    """

    mode: str
    rule_ids: frozenset[str]
    ranks: dict[str, int] | None = None

    @classmethod
    def ranked(cls, ranks: dict[str, int]) -> "PriorityOrder":
        return cls(RANKED, frozenset(ranks), dict(ranks))

    @classmethod
    def identity(cls, rule_ids) -> "PriorityOrder":
        return cls(IDENTITY, frozenset(rule_ids), None)

    def strictly_preferred(self, first: str, second: str) -> bool:
        if self.mode != RANKED or self.ranks is None:
            return False
        return self.ranks.get(first, 0) > self.ranks.get(second, 0)


@dataclass(frozen=True)
class AgentSpec:
    id: str
    decision_atoms: tuple[str, ...]
    facts: tuple[Formula, ...]
    beliefs: tuple[Rule, ...]
    desires: tuple[Rule, ...]
    priority: PriorityOrder
    initial_decision: frozenset[Literal] = frozenset()

    def desire_ids(self) -> frozenset[str]:
        return frozenset(r.id for r in self.desires)


@dataclass(frozen=True)
class AgentSystemSpec:
    name: str
    agents: tuple[AgentSpec, ...]
    world_atoms: tuple[str, ...]
    decision_mode: DecisionMode = DecisionMode.POSITIVE_SUBSETS
    max_atoms: int = DEFAULT_MAX_ATOMS

    @cached_property
    def vocabulary(self) -> Vocabulary:
        atoms = [Atom(name, agent.id)
                 for agent in self.agents for name in agent.decision_atoms]
        atoms += [Atom(name, None) for name in self.world_atoms]
        return Vocabulary(atoms)

    @cached_property
    def agent_ids(self) -> tuple[str, ...]:
        return tuple(a.id for a in self.agents)

    def agent(self, agent_id: str) -> AgentSpec:
        for a in self.agents:
            if a.id == agent_id:
                return a
        raise KeyError(f"no agent '{agent_id}'")

    def all_beliefs(self) -> tuple[Rule, ...]:
        return tuple(r for a in self.agents for r in a.beliefs)

    def all_desires(self) -> tuple[Rule, ...]:
        return tuple(r for a in self.agents for r in a.desires)

    def with_options(self, decision_mode: DecisionMode | None = None,
                     max_atoms: int | None = None) -> "AgentSystemSpec":
        out = self
        if decision_mode is not None:
            out = replace(out, decision_mode=decision_mode)
        if max_atoms is not None:
            out = replace(out, max_atoms=max_atoms)
        return out


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    code: str
    severity: str  # "error" | "warning"
    agent: str | None
    message: str

    def __str__(self) -> str:
        where = f" (agent {self.agent})" if self.agent else ""
        return f"[{self.severity}] {self.code}{where}: {self.message}"


def validate_spec(spec: AgentSystemSpec) -> list[Violation]:
    """Collect typing and priority violations; valid specs get an empty list.

    Violations are data, not exceptions: the report is deterministic and
    independent of declaration order.
    """
    out: list[Violation] = []
    vocab = spec.vocabulary
    for agent in spec.agents:
        for f in agent.facts:
            if not in_sublanguage(f, vocab, "world"):
                out.append(Violation(
                    "fact-not-in-L_W", "error", agent.id,
                    f"fact {format_formula(f)} mentions decision atoms"))
        for r in agent.beliefs:
            if not in_sublanguage(r.consequent, vocab, "world"):
                out.append(Violation(
                    "belief-consequent-not-in-L_W", "error", agent.id,
                    f"belief {r.id} concludes {format_formula(r.consequent)},"
                    " which mentions decision atoms"))
        desire_ids = agent.desire_ids()
        foreign = (agent.priority.rule_ids
                   | set(agent.priority.ranks or ())) - desire_ids
        if foreign:
            out.append(Violation(
                "cross-agent-priority", "error", agent.id,
                f"priority mentions rules not owned by the agent: "
                f"{', '.join(sorted(foreign))}"))
        if agent.priority.mode == RANKED:
            ranks = agent.priority.ranks or {}
            missing = desire_ids - set(ranks)
            if missing:
                out.append(Violation(
                    "priority-not-total", "error", agent.id,
                    f"unranked desires: {', '.join(sorted(missing))}"))
            by_rank: dict[int, list[str]] = {}
            for rule_id, rank in ranks.items():
                by_rank.setdefault(rank, []).append(rule_id)
            for rank, ids in sorted(by_rank.items()):
                if len(ids) > 1:
                    out.append(Violation(
                        "priority-not-total", "error", agent.id,
                        f"rank {rank} shared by: {', '.join(sorted(ids))}"))
        if not consistent_literals(agent.initial_decision):
            out.append(Violation(
                "initial-decision-inconsistent", "error", agent.id,
                "initial decision contains an atom with both polarities"))
        stray = {lit.atom for lit in agent.initial_decision
                 if lit.atom not in agent.decision_atoms}
        if stray:
            out.append(Violation(
                "initial-decision-inconsistent", "error", agent.id,
                f"initial decision uses atoms the agent does not own: "
                f"{', '.join(sorted(stray))}"))
    all_facts = [f for a in spec.agents for f in a.facts]
    if all_facts and not consistent(all_facts, atoms=vocab.names,
                                    max_atoms=spec.max_atoms):
        out.append(Violation(
            "facts-conflict", "warning", None,
            "the agents' facts are jointly inconsistent"))
    return out


def is_valid(spec: AgentSystemSpec) -> bool:
    return not any(v.severity == "error" for v in validate_spec(spec))


# ---------------------------------------------------------------------------
# The .bdg spec format
# ---------------------------------------------------------------------------
#
# Line-oriented; '#' starts a comment.  Example:
#
#   system "name"
#   option decision_mode = positive-subsets
#   agent alpha1 {
#     atoms a b c
#     priority ranked
#     fact !p
#     belief c => q
#     desire r1 [rank=2]: b => p
#     desire r2 [rank=1]: true => b
#     initial a
#   }
#   world p q
#
# Rule labels are optional; unlabeled rules get <agent>_b<i> / <agent>_d<i>
# ids.  Ranks are required exactly when the agent declares `priority ranked`
# (enforced by validate_spec, which reports missing or duplicate ranks).

_NAME_RE = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*$")
_LABEL_RE = re.compile(
    r"(?:(?P<id>[a-zA-Z][a-zA-Z0-9_]*)\s*)?(?:\[\s*rank\s*=\s*(?P<rank>-?\d+)\s*\])?$")

_OPTION_VALUES = {
    "decision_mode": {m.value: m for m in DecisionMode},
}


@dataclass
class _RawRule:
    kind: str
    label: str | None
    rank: int | None
    antecedent: str
    consequent: str
    line: int


@dataclass
class _RawAgent:
    id: str
    line: int
    atoms: list[str] = field(default_factory=list)
    priority_mode: str | None = None
    facts: list[tuple[str, int]] = field(default_factory=list)
    rules: list[_RawRule] = field(default_factory=list)
    initial: list[tuple[str, int]] = field(default_factory=list)


def _strip_comment(raw: str) -> str:
    # '#' starts a comment except inside the quoted system name
    out = []
    quoted = False
    for ch in raw:
        if ch == '"':
            quoted = not quoted
        elif ch == "#" and not quoted:
            break
        out.append(ch)
    return "".join(out).strip()


def _split_rule(text: str, lineno: int) -> tuple[str, str]:
    parts = text.split("=>")
    if len(parts) != 2:
        raise SpecSyntaxError("expected exactly one '=>' in rule", lineno)
    return parts[0].strip(), parts[1].strip()


def parse_spec(text: str) -> AgentSystemSpec:
    """Parse .bdg source into a fully resolved specification.

    Formulas are parsed against the complete declared vocabulary, so world
    atoms may be declared after the agents that use them.
    """
    name = ""
    options: dict[str, object] = {}
    world: list[str] = []
    raw_agents: list[_RawAgent] = []
    current: _RawAgent | None = None

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        if not line:
            continue
        if current is not None:
            if line == "}":
                raw_agents.append(current)
                current = None
                continue
            _parse_agent_line(current, line, lineno)
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "system":
            m = re.fullmatch(r'"([^"]*)"', rest)
            if m is None:
                raise SpecSyntaxError('expected: system "name"', lineno)
            name = m.group(1)
        elif head == "option":
            key, ok, value = (p.strip() for p in rest.partition("="))
            if not ok:
                raise SpecSyntaxError("expected: option NAME = VALUE", lineno)
            options[key] = _parse_option(key, value, lineno)
        elif head == "agent":
            m = re.fullmatch(r"([a-zA-Z][a-zA-Z0-9_]*)\s*\{", rest)
            if m is None:
                raise SpecSyntaxError("expected: agent NAME {", lineno)
            if any(a.id == m.group(1) for a in raw_agents):
                raise SpecSyntaxError(f"duplicate agent '{m.group(1)}'", lineno)
            current = _RawAgent(m.group(1), lineno)
        elif head == "world":
            for atom in rest.split():
                if not _NAME_RE.match(atom):
                    raise SpecSyntaxError(f"bad atom name '{atom}'", lineno)
                world.append(atom)
        else:
            raise SpecSyntaxError(f"unknown declaration '{head}'", lineno)

    if current is not None:
        raise SpecSyntaxError(f"agent '{current.id}' is never closed ('}}')",
                              current.line)
    if not raw_agents:
        raise SpecSyntaxError("a specification needs at least one agent")

    return _resolve(name, options, world, raw_agents)


def _parse_option(key: str, value: str, lineno: int):
    if key == "decision_mode":
        try:
            return _OPTION_VALUES[key][value]
        except KeyError:
            raise SpecSyntaxError(
                f"unknown decision_mode '{value}'", lineno) from None
    if key == "max_atoms":
        try:
            n = int(value)
        except ValueError:
            raise SpecSyntaxError("max_atoms must be an integer", lineno) from None
        if n <= 0:
            raise SpecSyntaxError("max_atoms must be positive", lineno)
        return n
    raise SpecSyntaxError(f"unknown option '{key}'", lineno)


def _parse_agent_line(agent: _RawAgent, line: str, lineno: int) -> None:
    head, _, rest = line.partition(" ")
    rest = rest.strip()
    if head == "atoms":
        for atom in rest.split():
            if not _NAME_RE.match(atom):
                raise SpecSyntaxError(f"bad atom name '{atom}'", lineno)
            agent.atoms.append(atom)
    elif head == "priority":
        if rest not in (RANKED, IDENTITY):
            raise SpecSyntaxError(
                "expected: priority ranked | priority identity", lineno)
        if agent.priority_mode is not None:
            raise SpecSyntaxError("priority declared twice", lineno)
        agent.priority_mode = rest
    elif head == "fact":
        agent.facts.append((rest, lineno))
    elif head in ("belief", "desire"):
        label, rank, body = None, None, rest
        if ":" in rest:
            prefix, body = (p.strip() for p in rest.split(":", 1))
            m = _LABEL_RE.fullmatch(prefix)
            if m is None:
                raise SpecSyntaxError(
                    f"bad rule label '{prefix}'", lineno)
            label = m.group("id")
            rank = int(m.group("rank")) if m.group("rank") else None
        ant, cons = _split_rule(body, lineno)
        agent.rules.append(_RawRule(head, label, rank, ant, cons, lineno))
    elif head == "initial":
        for token in rest.replace(",", " ").split():
            agent.initial.append((token, lineno))
    else:
        raise SpecSyntaxError(f"unknown agent declaration '{head}'", lineno)


def _resolve(name: str, options: dict, world: list[str],
             raw_agents: list[_RawAgent]) -> AgentSystemSpec:
    atoms = [Atom(n, a.id) for a in raw_agents for n in a.atoms]
    atoms += [Atom(n, None) for n in world]
    try:
        vocab = Vocabulary(atoms)
    except ValueError as exc:
        raise SpecSyntaxError(str(exc)) from None

    def formula(source: str, lineno: int) -> Formula:
        try:
            return parse_formula(source, vocab)
        except BdgameError as exc:
            raise SpecSyntaxError(f"{exc}", lineno) from None

    seen_rule_ids: set[str] = set()
    agents: list[AgentSpec] = []
    for raw in raw_agents:
        beliefs: list[Rule] = []
        desires: list[Rule] = []
        ranks: dict[str, int] = {}
        counters = {"belief": 0, "desire": 0}
        for r in raw.rules:
            counters[r.kind] += 1
            rule_id = r.label or f"{raw.id}_{r.kind[0]}{counters[r.kind]}"
            if rule_id in seen_rule_ids:
                raise SpecSyntaxError(f"duplicate rule id '{rule_id}'", r.line)
            seen_rule_ids.add(rule_id)
            rule = Rule(rule_id, formula(r.antecedent, r.line),
                        formula(r.consequent, r.line), r.kind, raw.id)
            if r.kind == "belief":
                if r.rank is not None:
                    raise SpecSyntaxError("belief rules take no rank", r.line)
                beliefs.append(rule)
            else:
                desires.append(rule)
                if r.rank is not None:
                    ranks[rule_id] = r.rank
        mode = raw.priority_mode or IDENTITY
        if mode == IDENTITY and ranks:
            raise SpecSyntaxError(
                "ranks are only meaningful with 'priority ranked'", raw.line)
        if mode == RANKED:
            # validate_spec reports desires the ranking misses
            priority = PriorityOrder(RANKED, frozenset(r.id for r in desires),
                                     ranks)
        else:
            priority = PriorityOrder.identity(r.id for r in desires)
        initial = set()
        for token, lineno in raw.initial:
            try:
                lit = parse_literal(token)
            except BdgameError as exc:
                raise SpecSyntaxError(str(exc), lineno) from None
            if lit.atom not in raw.atoms:
                raise SpecSyntaxError(
                    f"initial decision literal '{lit}' is not over the "
                    f"agent's decision atoms", lineno)
            initial.add(lit)
        agents.append(AgentSpec(
            id=raw.id,
            decision_atoms=tuple(raw.atoms),
            facts=tuple(dict.fromkeys(formula(src, ln)
                                      for src, ln in raw.facts)),
            beliefs=tuple(beliefs),
            desires=tuple(desires),
            priority=priority,
            initial_decision=frozenset(initial),
        ))
    return AgentSystemSpec(
        name=name,
        agents=tuple(agents),
        world_atoms=tuple(world),
        decision_mode=options.get("decision_mode",
                                  DecisionMode.POSITIVE_SUBSETS),
        max_atoms=options.get("max_atoms", DEFAULT_MAX_ATOMS),
    )


def format_spec(spec: AgentSystemSpec) -> str:
    """Canonical printer; parse_spec(format_spec(s)) == s for valid specs."""
    lines = [f'system "{spec.name}"']
    lines.append(f"option decision_mode = {spec.decision_mode.value}")
    lines.append(f"option max_atoms = {spec.max_atoms}")
    for agent in spec.agents:
        lines.append(f"agent {agent.id} {{")
        if agent.decision_atoms:
            lines.append("  atoms " + " ".join(agent.decision_atoms))
        lines.append(f"  priority {agent.priority.mode}")
        for f in agent.facts:
            lines.append(f"  fact {format_formula(f)}")
        for r in agent.beliefs:
            lines.append(f"  belief {r.id}: {r.antecedent} => {r.consequent}")
        ranks = agent.priority.ranks or {}
        for r in agent.desires:
            tag = f" [rank={ranks[r.id]}]" if r.id in ranks else ""
            lines.append(
                f"  desire {r.id}{tag}: {r.antecedent} => {r.consequent}")
        if agent.initial_decision:
            lits = sorted(agent.initial_decision, key=literal_sort_key)
            lines.append("  initial " + " ".join(str(l) for l in lits))
        lines.append("}")
    if spec.world_atoms:
        lines.append("world " + " ".join(spec.world_atoms))
    return "\n".join(lines) + "\n"
