import random

import pytest

from bdgame.errors import SpecSyntaxError
from bdgame.extension import Rule
from bdgame.logic import TRUE, Literal, Not, Var
from bdgame.model import (AgentSpec, AgentSystemSpec, DecisionMode,
                          PriorityOrder, format_spec, is_valid, parse_spec,
                          validate_spec)
from bdgame.verify import random_spec

EXAMPLES = ["conflicting_beliefs", "single_agent_priorities",
            "interdependence", "opposed_interests", "prisoners",
            "cooperation"]


def test_parse_counts(single_agent_priorities):
    spec = single_agent_priorities
    assert len(spec.agents) == 1
    agent = spec.agents[0]
    assert agent.decision_atoms == ("a", "b", "c", "d", "e")
    assert spec.world_atoms == ("p", "q")
    assert len(agent.beliefs) == 3
    assert len(agent.desires) == 5
    assert agent.initial_decision == {Literal("a")}
    assert agent.priority.mode == "ranked"
    assert agent.priority.ranks["d_bp"] > agent.priority.ranks["d_q"] > \
        agent.priority.ranks["d_a"] > agent.priority.ranks["d_b"] > \
        agent.priority.ranks["d_dq"]


def test_empty_spec_rejected():
    with pytest.raises(SpecSyntaxError, match="at least one agent"):
        parse_spec('system "empty"\nworld p\n')


def test_duplicate_atom_across_agents_rejected():
    src = (
        'agent x {\n  atoms a\n}\n'
        'agent y {\n  atoms a\n}\n'
    )
    with pytest.raises(SpecSyntaxError, match="duplicate atom 'a'"):
        parse_spec(src)


def test_duplicate_rule_id_rejected():
    src = (
        'agent x {\n  atoms a\n  desire d1: true => a\n'
        '  desire d1: true => !a\n}\n'
    )
    with pytest.raises(SpecSyntaxError, match="duplicate rule id"):
        parse_spec(src)


def test_unclosed_agent_block_rejected():
    with pytest.raises(SpecSyntaxError, match="never closed"):
        parse_spec("agent x {\n  atoms a\n")


def test_rank_under_identity_rejected():
    src = 'agent x {\n  atoms a\n  priority identity\n' \
          '  desire d1 [rank=1]: true => a\n}\n'
    with pytest.raises(SpecSyntaxError, match="priority ranked"):
        parse_spec(src)


def test_undeclared_atom_in_rule_carries_line():
    src = 'agent x {\n  atoms a\n  belief a => zz\n}\nworld p\n'
    with pytest.raises(SpecSyntaxError, match="line 3.*zz"):
        parse_spec(src)


def test_initial_must_use_own_atoms():
    src = 'agent x {\n  atoms a\n  initial p\n}\nworld p\n'
    with pytest.raises(SpecSyntaxError, match="decision atoms"):
        parse_spec(src)


def test_comments_and_blank_lines_ignored():
    src = ('# leading comment\n\nsystem "c"  # trailing\n'
           'agent x {\n  atoms a  # atoms\n}\n')
    spec = parse_spec(src)
    assert spec.name == "c"
    assert spec.agents[0].decision_atoms == ("a",)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def test_belief_about_decisions_flagged():
    src = 'agent x {\n  atoms a\n  belief true => a\n}\nworld p\n'
    spec = parse_spec(src)
    report = validate_spec(spec)
    assert [v.code for v in report] == ["belief-consequent-not-in-L_W"]
    assert not is_valid(spec)


@pytest.mark.parametrize("name", EXAMPLES)
def test_fixture_specs_are_valid(name, request):
    spec = request.getfixturevalue(name)
    assert [v for v in validate_spec(spec) if v.severity == "error"] == []


def test_shared_rank_flagged():
    src = ('agent x {\n  atoms a\n  priority ranked\n'
           '  desire d1 [rank=1]: true => a\n'
           '  desire d2 [rank=1]: true => !a\n}\n')
    report = validate_spec(parse_spec(src))
    assert any(v.code == "priority-not-total" and "rank 1" in v.message
               for v in report)


def test_missing_rank_flagged():
    src = ('agent x {\n  atoms a\n  priority ranked\n'
           '  desire d1 [rank=1]: true => a\n'
           '  desire d2: true => !a\n}\n')
    report = validate_spec(parse_spec(src))
    assert any(v.code == "priority-not-total" and "d2" in v.message
               for v in report)


def test_cross_agent_priority_flagged():
    desire = Rule("mine", TRUE, Var("a"), "desire", "x")
    agent = AgentSpec(
        id="x", decision_atoms=("a",), facts=(), beliefs=(),
        desires=(desire,),
        priority=PriorityOrder.ranked({"mine": 2, "foreign": 1}))
    spec = AgentSystemSpec("t", (agent,), ("p",))
    report = validate_spec(spec)
    assert any(v.code == "cross-agent-priority" for v in report)


def test_inconsistent_initial_decision_flagged():
    agent = AgentSpec(
        id="x", decision_atoms=("a",), facts=(), beliefs=(), desires=(),
        priority=PriorityOrder.identity(()),
        initial_decision=frozenset({Literal("a"), Literal("a", False)}))
    spec = AgentSystemSpec("t", (agent,), ())
    assert any(v.code == "initial-decision-inconsistent"
               for v in validate_spec(spec))


def test_conflicting_facts_warn_only():
    src = ('agent x {\n  atoms a\n  fact p\n}\n'
           'agent y {\n  atoms b\n  fact !p\n}\nworld p\n')
    spec = parse_spec(src)
    report = validate_spec(spec)
    assert [v.code for v in report] == ["facts-conflict"]
    assert report[0].severity == "warning"
    assert is_valid(spec)


def test_validation_is_declaration_order_independent():
    front = ('agent x {\n  atoms a\n  belief true => a\n  fact a & p\n}\n'
             'world p\n')
    back = ('agent x {\n  atoms a\n  fact a & p\n  belief true => a\n}\n'
            'world p\n')
    codes_front = sorted(v.code for v in validate_spec(parse_spec(front)))
    codes_back = sorted(v.code for v in validate_spec(parse_spec(back)))
    assert codes_front == codes_back == \
        ["belief-consequent-not-in-L_W", "fact-not-in-L_W"]


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("name", EXAMPLES)
def test_print_parse_identity_on_fixtures(name, request):
    spec = request.getfixturevalue(name)
    assert parse_spec(format_spec(spec)) == spec


def test_print_parse_identity_on_random_specs():
    rng = random.Random(77)
    for _ in range(100):
        spec = random_spec(rng)
        assert parse_spec(format_spec(spec)) == spec


def test_options_round_trip():
    src = ('system "o"\noption decision_mode = literal-subsets\n'
           'option max_atoms = 12\nagent x {\n  atoms a\n}\n')
    spec = parse_spec(src)
    assert spec.decision_mode is DecisionMode.LITERAL_SUBSETS
    assert spec.max_atoms == 12
    assert parse_spec(format_spec(spec)) == spec
