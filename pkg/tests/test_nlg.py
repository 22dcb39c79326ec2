import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flagquiz.dialogue import AgentAction
from flagquiz.nlg import TemplateError, load_templates, realize, render_options


@pytest.fixture(scope="module")
def pools():
    return load_templates()


def test_bundled_pools_have_variety(pools):
    for act, pool in pools.items():
        assert len(pool) >= 3, act


def test_confirmation_renders_candidate(pools):
    action = AgentAction(
        "confirm_answer", {"candidate": "CX", "candidate_name": "Christmas Island"}
    )
    history = {}
    text = realize(action, pools, random.Random(0), history)
    assert "Christmas Island" in text
    assert "final answer?" in text


def test_single_template_pool_repeats():
    pools = {"prompt_continue": ("Go on.",)}
    action = AgentAction("prompt_continue", {})
    history = {}
    rng = random.Random(0)
    outputs = {realize(action, pools, rng, history) for _ in range(5)}
    assert outputs == {"Go on."}


def test_no_consecutive_repeat_on_pool_of_three(pools):
    action = AgentAction("prompt_continue", {})
    history = {}
    rng = random.Random(42)
    outputs = [realize(action, pools, rng, history) for _ in range(100)]
    assert all(a != b for a, b in zip(outputs, outputs[1:]))


def test_histories_are_per_act(pools):
    history = {}
    rng = random.Random(0)
    realize(AgentAction("prompt_continue", {}), pools, rng, history)
    realize(AgentAction("acknowledge_skip", {}), pools, rng, history)
    assert set(history) == {"prompt_continue", "acknowledge_skip"}


def test_missing_pool_is_an_error(pools):
    with pytest.raises(TemplateError, match="no template pool"):
        realize(AgentAction("sing_a_song", {}), pools, random.Random(0), {})


def test_unresolvable_placeholder_names_it():
    pools = {"give_clue": ("Here: {clue} about {candidate}",)}
    action = AgentAction("give_clue", {"clue": "it is cold"})
    with pytest.raises(TemplateError, match="candidate"):
        realize(action, pools, random.Random(0), {})


def test_realize_does_not_touch_the_action(pools):
    payload = {"clue": "some clue"}
    action = AgentAction("give_clue", dict(payload))
    realize(action, pools, random.Random(0), {})
    assert action.payload == payload


def test_option_list_rendering():
    names = ["Christmas Island", "Montserrat", "Czechia", "Antigua and Barbuda"]
    assert (
        render_options(names)
        == "Christmas Island, Montserrat, Czechia or Antigua and Barbuda"
    )
    assert render_options(["France"]) == "France"


def test_result_wording_follows_outcome(pools):
    history = {}
    rng = random.Random(1)
    win = realize(
        AgentAction("announce_result", {"score": 3, "rounds": 3, "win": True}),
        pools, rng, history,
    )
    lose = realize(
        AgentAction("announce_result", {"score": 1, "rounds": 3, "win": False}),
        pools, rng, history,
    )
    assert "3 out of 3" in win and "win" in win.lower()
    assert "1 out of 3" in lose


@given(draws=st.integers(10, 60), seed=st.integers(0, 1000))
@settings(deadline=None)
def test_anti_repetition_property(pools, draws, seed):
    action = AgentAction("acknowledge_skip", {})
    history = {}
    rng = random.Random(seed)
    outputs = [realize(action, pools, rng, history) for _ in range(draws)]
    assert all(a != b for a, b in zip(outputs, outputs[1:]))
