import pytest

from bdgame import load_example
from bdgame.decision import Decision, DecisionProfile
from bdgame.logic import Literal


@pytest.fixture(scope="session")
def conflicting_beliefs():
    return load_example("conflicting_beliefs")


@pytest.fixture(scope="session")
def single_agent_priorities():
    return load_example("single_agent_priorities")


@pytest.fixture(scope="session")
def interdependence():
    return load_example("interdependence")


@pytest.fixture(scope="session")
def opposed_interests():
    return load_example("opposed_interests")


@pytest.fixture(scope="session")
def prisoners():
    return load_example("prisoners")


@pytest.fixture(scope="session")
def cooperation():
    return load_example("cooperation")


def profile(**decisions):
    """Build a decision profile from agent -> literal-name iterables.

    Literal names use the formula syntax for negation: "a" or "!a".
    """
    parts = []
    for agent, names in decisions.items():
        literals = frozenset(
            Literal(n[1:], False) if n.startswith("!") else Literal(n)
            for n in names)
        parts.append(Decision(agent, literals))
    return DecisionProfile(tuple(parts))
