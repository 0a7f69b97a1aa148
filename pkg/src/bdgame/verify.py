"""Seeded generators and law suites backing the `check` command and tests.

Everything here is deterministic given the seed: generators draw from
`random.Random`, exhaustive families iterate in a fixed order, and check
results carry the first counterexample found.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from typing import Iterator, Sequence

from .decision import set_geq, set_preference
from .extension import Rule, extension, fixpoint_certificate
from .game import derive_game, dominant, nash, pareto, strongly_pareto
from .goals import (feasible_representation_check, goal_set_of,
                    heuristic_goals, pareto_via_goals, representation_check,
                    u_closure)
from .logic import (And, Formula, Implies, Not, Or, TRUE, Var, atoms_of,
                    entails)
from .model import (IDENTITY, RANKED, AgentSpec, AgentSystemSpec,
                    DecisionMode, PriorityOrder)


@dataclass
class CheckResult:
    name: str
    passed: bool
    checked: int = 0
    details: str = ""
    counterexample: dict | None = None

    def __str__(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" ({self.details})" if self.details else ""
        return f"{status} {self.name}: {self.checked} instances{extra}"


# ---------------------------------------------------------------------------
# Random generators
# ---------------------------------------------------------------------------

def random_formula(rng: random.Random, atoms: Sequence[str],
                   depth: int = 2) -> Formula:
    if depth <= 0 or rng.random() < 0.4:
        roll = rng.random()
        if roll < 0.08:
            return TRUE
        return Var(rng.choice(list(atoms)))
    kind = rng.randrange(4)
    if kind == 0:
        return Not(random_formula(rng, atoms, depth - 1))
    ctor = (And, Or, Implies)[kind - 1]
    return ctor(random_formula(rng, atoms, depth - 1),
                random_formula(rng, atoms, depth - 1))


def random_rules(rng: random.Random, atoms: Sequence[str], count: int,
                 owner: str = "a1") -> tuple[Rule, ...]:
    return tuple(
        Rule(f"{owner}_r{i + 1}",
             TRUE if rng.random() < 0.3 else random_formula(rng, atoms, 1),
             random_formula(rng, atoms, 1), "belief", owner)
        for i in range(count))


def random_theory(rng: random.Random, atoms: Sequence[str],
                  count: int) -> frozenset[Formula]:
    return frozenset(random_formula(rng, atoms, 1) for _ in range(count))


def _random_priority(rng: random.Random, desires: Sequence[Rule]) -> PriorityOrder:
    ids = [r.id for r in desires]
    if rng.random() < 0.3:
        return PriorityOrder.identity(ids)
    shuffled = list(ids)
    rng.shuffle(shuffled)
    return PriorityOrder.ranked({rid: i + 1 for i, rid in enumerate(shuffled)})


def random_spec(rng: random.Random, *, max_agents: int = 2,
                max_decision_atoms: int = 2, max_rules: int = 3,
                world_atoms: Sequence[str] = ("p", "q")) -> AgentSystemSpec:
    """A small well-typed random specification.

    Belief consequents stay in the world language; desire rules range over
    the whole vocabulary.  Initial decisions are empty so every candidate
    decision shape stays available.
    """
    n_agents = rng.randint(1, max_agents)
    agent_ids = [f"a{i + 1}" for i in range(n_agents)]
    decision_atoms = {}
    pool = iter("abcdefgh")
    for aid in agent_ids:
        decision_atoms[aid] = tuple(
            next(pool) for _ in range(rng.randint(1, max_decision_atoms)))
    all_atoms = [a for atoms in decision_atoms.values() for a in atoms]
    all_atoms += list(world_atoms)
    agents = []
    for aid in agent_ids:
        n_rules = rng.randint(0, max_rules)
        n_beliefs = rng.randint(0, n_rules)
        beliefs = tuple(
            Rule(f"{aid}_b{i + 1}",
                 random_formula(rng, all_atoms, 1),
                 random_formula(rng, list(world_atoms), 1), "belief", aid)
            for i in range(n_beliefs))
        desires = tuple(
            Rule(f"{aid}_d{i + 1}",
                 TRUE if rng.random() < 0.5
                 else random_formula(rng, all_atoms, 1),
                 random_formula(rng, all_atoms, 1), "desire", aid)
            for i in range(n_rules - n_beliefs))
        facts = tuple(random_formula(rng, list(world_atoms), 1)
                      for _ in range(rng.randint(0, 1)))
        agents.append(AgentSpec(
            id=aid,
            decision_atoms=decision_atoms[aid],
            facts=facts,
            beliefs=beliefs,
            desires=desires,
            priority=_random_priority(rng, desires),
            initial_decision=frozenset(),
        ))
    mode = rng.choice([DecisionMode.POSITIVE_SUBSETS,
                       DecisionMode.TOTAL_ASSIGNMENTS])
    return AgentSystemSpec("random", tuple(agents), tuple(world_atoms), mode)


def exhaustive_small_specs() -> Iterator[AgentSystemSpec]:
    """A fixed exhaustive family of two-agent specifications.

    Spans one and two decision atoms per agent, up to one belief and two
    ranked desires per agent (at most three rules each), over one world
    atom.  Deterministic iteration order.
    """
    world = ("p",)

    def agent_variants(aid: str, atoms2: tuple[str, str]) -> list[AgentSpec]:
        out = []
        for atoms in (atoms2[:1], atoms2):
            x = atoms[0]
            belief_options: list[tuple] = [
                (), (Rule(f"{aid}_b1", Var(x), Var("p"), "belief", aid),),
                (Rule(f"{aid}_b1", Var(x), Not(Var("p")), "belief", aid),)]
            desire_pool = [
                (TRUE, Var("p")), (TRUE, Not(Var("p"))), (TRUE, Var(x))]
            desire_options: list[tuple[tuple[Formula, Formula], ...]] = [()]
            desire_options += [(d,) for d in desire_pool]
            for pair in combinations(desire_pool, 2):
                desire_options += list(permutations(pair))
            for beliefs in belief_options:
                for ordered in desire_options:
                    desires = tuple(
                        Rule(f"{aid}_d{i + 1}", ant, cons, "desire", aid)
                        for i, (ant, cons) in enumerate(ordered))
                    # rank by position: earlier in the tuple = higher priority
                    ranks = {r.id: len(desires) - i
                             for i, r in enumerate(desires)}
                    out.append(AgentSpec(
                        id=aid, decision_atoms=atoms, facts=(),
                        beliefs=beliefs, desires=desires,
                        priority=PriorityOrder.ranked(ranks),
                        initial_decision=frozenset()))
        return out

    for first in agent_variants("a1", ("a", "b")):
        for second in agent_variants("a2", ("c", "d")):
            yield AgentSystemSpec(
                "family", (first, second), world,
                DecisionMode.TOTAL_ASSIGNMENTS)


# ---------------------------------------------------------------------------
# Law suites
# ---------------------------------------------------------------------------

def check_extension_laws(seed: int = 0, samples: int = 1000, *,
                         rules: Sequence[Rule] | None = None,
                         max_rule_count: int = 6,
                         max_atom_count: int = 6) -> CheckResult:
    """Containment, idempotence, termination, and monotonicity.

    With ``rules`` given, theories vary over that rule set's vocabulary;
    otherwise each instance draws a fresh rule set.
    """
    rng = random.Random(seed)
    for i in range(samples):
        if rules is None:
            atoms = [f"x{j}" for j in range(rng.randint(1, max_atom_count))]
            rs = random_rules(rng, atoms, rng.randint(0, max_rule_count))
        else:
            rs = tuple(rules)
            atoms = sorted({name for r in rs
                            for f in (r.antecedent, r.consequent)
                            for name in atoms_of(f)}) or ["p"]
        base = random_theory(rng, atoms, rng.randint(0, 3))
        extra = random_theory(rng, atoms, rng.randint(0, 2))
        ext = extension(rs, base)
        bad = None
        if not base <= ext.formulas:
            bad = "containment"
        elif ext.iterations > len(rs):
            bad = "termination"
        elif extension(rs, ext.formulas).formulas != ext.formulas:
            bad = "idempotence"
        elif not ext.formulas <= extension(rs, base | extra).formulas:
            bad = "monotonicity"
        if bad:
            return CheckResult(
                "extension-laws", False, i + 1, f"{bad} violated",
                {"rules": [str(r) for r in rs],
                 "base": sorted(map(str, base)),
                 "extra": sorted(map(str, extra))})
    return CheckResult("extension-laws", True, samples)


def check_fixpoint_agreement(*, max_pool: int = 6,
                             max_rules: int = 5) -> CheckResult:
    """Iterative construction vs. the intersection characterization.

    Exhaustive over all rule subsets of a fixed pool (sizes up to
    ``max_rules``) and a fixed family of bases.
    """
    a, b, p, q = Var("a"), Var("b"), Var("p"), Var("q")
    pool = [
        Rule("r1", TRUE, p, "belief", "a1"),
        Rule("r2", a, Not(p), "belief", "a1"),
        Rule("r3", p, q, "belief", "a1"),
        Rule("r4", q, p, "belief", "a1"),
        Rule("r5", And(a, b), q, "belief", "a1"),
        Rule("r6", Not(q), b, "belief", "a1"),
    ][:max_pool]
    bases = [frozenset(), frozenset({a}), frozenset({a, b}),
             frozenset({Not(q)}), frozenset({Or(a, p)})]
    checked = 0
    for size in range(min(max_rules, len(pool)) + 1):
        for rs in combinations(pool, size):
            for base in bases:
                checked += 1
                ext = extension(rs, base)
                if not fixpoint_certificate(rs, base, ext.formulas):
                    return CheckResult(
                        "fixpoint-agreement", False, checked,
                        "iterative result rejected by the intersection oracle",
                        {"rules": [str(r) for r in rs],
                         "base": sorted(map(str, base))})
    return CheckResult("fixpoint-agreement", True, checked)


def check_order_laws(max_rules: int = 4) -> CheckResult:
    """Reflexivity, transitivity, antisymmetry-up-to-equality, and the
    identity-mode/superset equivalence, exhaustively over small rule sets."""
    ids = tuple(f"d{i + 1}" for i in range(max_rules))
    ranked = PriorityOrder.ranked({d: i + 1 for i, d in enumerate(ids)})
    ident = PriorityOrder.identity(ids)
    subsets = [frozenset(c) for size in range(len(ids) + 1)
               for c in combinations(ids, size)]
    checked = 0
    antisymmetry_failures = 0
    for order in (ranked, ident):
        for x in subsets:
            checked += 1
            if not set_geq(x, x, order):
                return CheckResult("order-laws", False, checked,
                                   "reflexivity violated",
                                   {"set": sorted(x)})
        for x, y in product(subsets, repeat=2):
            checked += 1
            if order.mode == IDENTITY:
                if set_geq(x, y, order) != (y <= x):
                    return CheckResult(
                        "order-laws", False, checked,
                        "identity mode must equal the superset relation",
                        {"x": sorted(x), "y": sorted(y)})
            if set_geq(x, y, order) and set_geq(y, x, order) and x != y:
                antisymmetry_failures += 1
        for x, y, z in product(subsets, repeat=3):
            checked += 1
            if (set_geq(x, y, order) and set_geq(y, z, order)
                    and not set_geq(x, z, order)):
                return CheckResult("order-laws", False, checked,
                                   "transitivity violated",
                                   {"x": sorted(x), "y": sorted(y),
                                    "z": sorted(z)})
    return CheckResult(
        "order-laws", True, checked,
        f"antisymmetry violations: {antisymmetry_failures}")


def check_game_laws(seed: int = 0, samples: int = 60) -> CheckResult:
    """strongly-Pareto within Pareto, dominant within Nash, Pareto nonempty,
    and witness re-validation, over seeded random games."""
    rng = random.Random(seed)
    checked = 0
    for _ in range(samples):
        spec = random_spec(rng)
        game = derive_game(spec)
        checked += 1
        p = pareto(game)
        sp = strongly_pareto(game)
        d = dominant(game)
        n = nash(game)
        detail = None
        if not set(sp.profile_indexes) <= set(p.profile_indexes):
            detail = "strongly-Pareto not within Pareto"
        elif not set(d.profile_indexes) <= set(n.profile_indexes):
            detail = "dominant not within Nash"
        elif game.profiles and not p.profile_indexes:
            detail = "Pareto empty on a nonempty game"
        else:
            for i, w in p.witnesses.items():
                if not all(game.strictly_better(w.other, i, a)
                           for a in spec.agent_ids):
                    detail = "stale Pareto witness"
                    break
            for i, w in sp.witnesses.items():
                if detail:
                    break
                if not (all(game.profile_geq(w.other, i, a)
                            for a in spec.agent_ids)
                        and any(game.strictly_better(w.other, i, a)
                                for a in spec.agent_ids)):
                    detail = "stale strongly-Pareto witness"
            for i, w in d.witnesses.items():
                if detail:
                    break
                if game.profile_geq(i, w.other, w.agent):
                    detail = "stale dominant witness"
            for i, w in n.witnesses.items():
                if detail:
                    break
                if w.other is not None and game.profile_geq(i, w.other,
                                                            w.agent):
                    detail = "stale Nash witness"
        if detail:
            from .model import format_spec
            return CheckResult("game-laws", False, checked, detail,
                               {"spec": format_spec(spec)})
    return CheckResult("game-laws", True, checked)


def check_representation(spec: AgentSystemSpec, seed: int = 0,
                         family_samples: int = 5) -> CheckResult:
    """Both representation directions on one specification.

    Families checked: every singleton closure, the full feasible family,
    and closures of seeded random subsets of the feasible profiles.
    """
    from .goals import ProfileFamily

    rng = random.Random(seed)
    game = derive_game(spec)
    feasible = [ep.profile for ep in game.profiles]
    families = [u_closure(spec, [p], game=game) for p in feasible]
    families.append(ProfileFamily(tuple(feasible), u_closed=True))
    for _ in range(family_samples):
        if not feasible:
            break
        subset = rng.sample(feasible, rng.randint(1, len(feasible)))
        families.append(u_closure(spec, subset, game=game))
    checked = 0
    for family in families:
        checked += 1
        report = representation_check(spec, family, game=game)
        if not report.passed:
            return CheckResult(
                "representation", False, checked,
                str(report.violations[0]),
                {"family": [str(p) for p in family.profiles]})
    feas = feasible_representation_check(spec, game=game)
    checked += 1
    if not feas.passed:
        return CheckResult("representation", False, checked,
                           str(feas.violations[0]), None)
    return CheckResult("representation", True, checked)


def check_representation_corpus(seed: int = 0, samples: int = 500, *,
                                exhaustive: bool = True) -> CheckResult:
    """Representation checks over the exhaustive family plus random specs."""
    rng = random.Random(seed)
    checked = 0
    if exhaustive:
        for spec in exhaustive_small_specs():
            checked += 1
            result = check_representation(spec, seed=rng.randrange(1 << 30),
                                          family_samples=1)
            if not result.passed:
                from .model import format_spec
                result.counterexample = {"spec": format_spec(spec),
                                         **(result.counterexample or {})}
                result.checked = checked
                return result
    for _ in range(samples):
        spec = random_spec(rng, max_rules=3)
        checked += 1
        result = check_representation(spec, seed=rng.randrange(1 << 30),
                                      family_samples=2)
        if not result.passed:
            from .model import format_spec
            result.counterexample = {"spec": format_spec(spec),
                                     **(result.counterexample or {})}
            result.checked = checked
            return result
    return CheckResult("representation", True, checked)


def check_pipeline_equivalence(spec: AgentSystemSpec) -> CheckResult:
    """Profile-first and goals-first Pareto families must coincide."""
    game = derive_game(spec)
    direct = pareto(game)
    closed = u_closure(
        spec, [game.profiles[i].profile for i in direct.profile_indexes],
        game=game)
    via = pareto_via_goals(spec, game=game)
    if set(closed.profiles) != set(via.pareto_family.profiles):
        return CheckResult(
            "pipeline-equivalence", False, 1, "families differ",
            {"profile-first": sorted(str(p) for p in closed.profiles),
             "goals-first": sorted(str(p)
                                   for p in via.pareto_family.profiles)})
    return CheckResult("pipeline-equivalence", True, 1)


def check_monotonicity(spec: AgentSystemSpec, seed: int = 0,
                       samples: int = 200) -> CheckResult:
    """Extension monotonicity over the spec's own rules and random theories."""
    rng = random.Random(seed)
    rules = spec.all_beliefs() + spec.all_desires()
    atoms = list(spec.vocabulary.names) or ["p"]
    for i in range(samples):
        base = random_theory(rng, atoms, rng.randint(0, 3))
        extra = random_theory(rng, atoms, rng.randint(0, 2))
        small = extension(rules, base, atoms=spec.vocabulary.names,
                          max_atoms=spec.max_atoms)
        big = extension(rules, base | extra, atoms=spec.vocabulary.names,
                        max_atoms=spec.max_atoms)
        if not small.formulas <= big.formulas:
            return CheckResult(
                "monotonicity", False, i + 1, "extension shrank",
                {"base": sorted(map(str, base)),
                 "extra": sorted(map(str, extra))})
    return CheckResult("monotonicity", True, samples)


def check_heuristic_fragment(seed: int = 0, samples: int = 200) -> CheckResult:
    """Empirical containment of positive goals in the heuristic pool.

    On specs whose belief rules are triggered by the world only, every
    positive goal of every feasible profile's goal set should be entailed
    by the heuristic pool.  Counterexamples are reported as details, not
    failures: this documents observed behaviour.
    """
    from .goals import fragment_check
    from .model import format_spec

    rng = random.Random(seed)
    examined = 0
    contained = 0
    misses = 0
    first_miss = None
    draws = 0
    while examined < samples and draws < samples * 50:
        draws += 1
        spec = random_spec(rng, max_rules=3)
        if not fragment_check(spec):
            continue
        examined += 1
        pool = heuristic_goals(spec)
        game = derive_game(spec)
        ok = True
        for ep in game.profiles:
            gs = goal_set_of(spec, ep.profile)
            for goal in gs.positive:
                if not entails(pool, goal, atoms=spec.vocabulary.names,
                               max_atoms=spec.max_atoms):
                    ok = False
                    if first_miss is None:
                        first_miss = {"spec": format_spec(spec),
                                      "goal": str(goal)}
        if ok:
            contained += 1
        else:
            misses += 1
    return CheckResult(
        "heuristic-fragment", True, examined,
        f"contained on {contained}/{examined} fragment specs, "
        f"misses on {misses}",
        first_miss)
