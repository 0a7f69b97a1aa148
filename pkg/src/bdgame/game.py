"""Derived games and solution concepts over feasible decision profiles.

The game of a specification pairs the jointly feasible profiles (drawn from
the product of each agent's individually feasible decisions) with the
per-agent preference orders induced by unreached desires.  Solution concepts
are computed by brute force over the feasible profiles; every exclusion
carries a witness that can be re-validated against the definitions.

Swapping one agent's decision into a profile can produce a jointly
infeasible profile even when both components are individually feasible.
The ``infeasible_swaps`` policy decides whether such Nash deviations are
skipped (the default: an impossible profile neither rewards nor punishes
anyone) or fail the candidate.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product

from .decision import (DEFAULT_DECISION_CAP, DEFAULT_PROFILE_CAP, Decision,
                       DecisionProfile, DesireReport, desire_report,
                       enumerate_decisions, is_feasible_decision,
                       joint_extension, set_geq)
from .errors import CombinatorialBoundError
from .extension import Extension
from .model import AgentSystemSpec

SKIP = "skip"
FAIL = "fail"

PARETO = "pareto"
STRONG_PARETO = "strong-pareto"
DOMINANT = "dominant"
NASH = "nash"
CONCEPTS = (PARETO, STRONG_PARETO, DOMINANT, NASH)


@dataclass(frozen=True)
class EvaluatedProfile:
    profile: DecisionProfile
    extension: Extension
    report: DesireReport | None  # None when the profile is infeasible


def evaluate_profile(spec: AgentSystemSpec,
                     profile: DecisionProfile) -> EvaluatedProfile:
    ext = joint_extension(spec, profile)
    report = desire_report(spec, profile, ext) if ext.consistent else None
    return EvaluatedProfile(profile, ext, report)


@dataclass(frozen=True)
class GameSpecification:
    spec: AgentSystemSpec
    profiles: tuple[EvaluatedProfile, ...]  # feasible only, canonical order
    feasible_decisions: dict[str, tuple[Decision, ...]]

    def index_of(self, profile: DecisionProfile) -> int | None:
        return self._index.get(profile)

    @property
    def _index(self) -> dict[DecisionProfile, int]:
        cached = self.__dict__.get("_index_cache")
        if cached is None:
            cached = {ep.profile: i for i, ep in enumerate(self.profiles)}
            self.__dict__["_index_cache"] = cached
        return cached

    def unreached(self, index: int, agent_id: str) -> frozenset[str]:
        report = self.profiles[index].report
        assert report is not None
        return report.unreached(agent_id)

    def profile_geq(self, first: int, second: int, agent_id: str) -> bool:
        """first is at least as good as second for the agent."""
        order = self.spec.agent(agent_id).priority
        return set_geq(self.unreached(second, agent_id),
                       self.unreached(first, agent_id), order)

    def strictly_better(self, first: int, second: int, agent_id: str) -> bool:
        return (self.profile_geq(first, second, agent_id)
                and not self.profile_geq(second, first, agent_id))


def derive_game(spec: AgentSystemSpec, *,
                max_decisions: int = DEFAULT_DECISION_CAP,
                max_profiles: int = DEFAULT_PROFILE_CAP,
                jobs: int = 1) -> GameSpecification:
    """Enumerate feasible decisions per agent and keep jointly feasible profiles.

    Profile evaluation is pure, so ``jobs`` only parallelizes it; results
    are merged in enumeration order and never depend on the degree.
    """
    feasible: dict[str, tuple[Decision, ...]] = {}
    for agent in spec.agents:
        candidates = enumerate_decisions(spec, agent.id,
                                         max_decisions=max_decisions)
        feasible[agent.id] = tuple(
            d for d in candidates if is_feasible_decision(spec, agent.id, d))
    total = 1
    for ds in feasible.values():
        total *= len(ds)
    if total > max_profiles:
        raise CombinatorialBoundError(
            f"{total} candidate profiles (cap {max_profiles})")
    candidates = [DecisionProfile(combo)
                  for combo in product(*feasible.values())]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            evaluated = list(pool.map(lambda p: evaluate_profile(spec, p),
                                      candidates))
    else:
        evaluated = [evaluate_profile(spec, p) for p in candidates]
    return GameSpecification(
        spec=spec,
        profiles=tuple(ep for ep in evaluated if ep.report is not None),
        feasible_decisions=feasible,
    )


@dataclass(frozen=True)
class ExclusionWitness:
    """Why a profile fails a concept.

    For pareto/strong-pareto: ``other`` is a profile improving on the
    candidate.  For dominant: the candidate's component for ``agent`` is not
    weakly best against profile ``other``.  For nash: ``agent`` gains by
    deviating to ``decision`` (reaching ``other`` when that profile is
    feasible, None under the fail policy).
    """

    agent: str | None = None
    other: int | None = None
    decision: Decision | None = None


@dataclass(frozen=True)
class SolutionReport:
    concept: str
    profile_indexes: tuple[int, ...]
    witnesses: dict[int, ExclusionWitness]


def pareto(game: GameSpecification) -> SolutionReport:
    """Profiles no feasible alternative strictly improves for every agent."""
    agents = game.spec.agent_ids
    included, witnesses = [], {}
    for i in range(len(game.profiles)):
        witness = next(
            (j for j in range(len(game.profiles)) if j != i
             and all(game.strictly_better(j, i, a) for a in agents)),
            None)
        if witness is None:
            included.append(i)
        else:
            witnesses[i] = ExclusionWitness(other=witness)
    return SolutionReport(PARETO, tuple(included), witnesses)


def strongly_pareto(game: GameSpecification) -> SolutionReport:
    """Profiles with no alternative weakly better for all, strictly for some."""
    agents = game.spec.agent_ids
    included, witnesses = [], {}
    for i in range(len(game.profiles)):
        witness = next(
            (j for j in range(len(game.profiles)) if j != i
             and all(game.profile_geq(j, i, a) for a in agents)
             and any(game.strictly_better(j, i, a) for a in agents)),
            None)
        if witness is None:
            included.append(i)
        else:
            witnesses[i] = ExclusionWitness(other=witness)
    return SolutionReport(STRONG_PARETO, tuple(included), witnesses)


def dominant(game: GameSpecification) -> SolutionReport:
    """Profiles every agent finds at least as good as every feasible profile.

    A dominant profile is optimal for each agent regardless of anything the
    others could decide instead, so it tops every agent's order at once.
    A per-component dominant-strategy reading would be strictly weaker: an
    agent that alone controls its favourite world parameter has a dominant
    component even in games of fully opposed interests, which are exactly
    the games meant to have no dominant solution.  Dominant profiles are
    always Nash and Pareto.
    """
    agents = game.spec.agent_ids
    included, witnesses = [], {}
    for i in range(len(game.profiles)):
        witness = next(
            ((j, a) for j in range(len(game.profiles)) if j != i
             for a in agents if not game.profile_geq(i, j, a)),
            None)
        if witness is None:
            included.append(i)
        else:
            witnesses[i] = ExclusionWitness(agent=witness[1], other=witness[0])
    return SolutionReport(DOMINANT, tuple(included), witnesses)


def nash(game: GameSpecification, *,
         infeasible_swaps: str = SKIP) -> SolutionReport:
    """Profiles where no agent has a strictly better unilateral deviation.

    Deviations range over the agent's individually feasible decisions;
    deviations that make the joint profile infeasible are skipped under the
    default policy and fail the candidate under the fail policy.
    """
    included, witnesses = [], {}
    for i, candidate in enumerate(game.profiles):
        witness = None
        for agent_id in game.spec.agent_ids:
            current = candidate.profile.decision_for(agent_id)
            for deviation in game.feasible_decisions[agent_id]:
                if deviation == current:
                    continue
                deviated = game.index_of(
                    candidate.profile.with_decision(deviation))
                if deviated is None:
                    if infeasible_swaps == FAIL:
                        witness = ExclusionWitness(agent=agent_id,
                                                   decision=deviation)
                        break
                    continue
                if not game.profile_geq(i, deviated, agent_id):
                    witness = ExclusionWitness(agent=agent_id, other=deviated,
                                               decision=deviation)
                    break
            if witness is not None:
                break
        if witness is None:
            included.append(i)
        else:
            witnesses[i] = witness
    return SolutionReport(NASH, tuple(included), witnesses)


def solve(game: GameSpecification, concept: str, *,
          infeasible_swaps: str = SKIP) -> SolutionReport:
    """Dispatch by concept name; ``infeasible_swaps`` only affects nash,
    the one concept whose quantifier can leave the feasible set."""
    if concept == PARETO:
        return pareto(game)
    if concept == STRONG_PARETO:
        return strongly_pareto(game)
    if concept == DOMINANT:
        return dominant(game)
    if concept == NASH:
        return nash(game, infeasible_swaps=infeasible_swaps)
    raise ValueError(f"unknown solution concept '{concept}'")
