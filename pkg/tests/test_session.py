import json

import pytest

from flagquiz import DIARISED, PROCEDURAL, GameSession, Question, SessionConfig
from flagquiz.dialogue import ConfigurationError


def make_session(registry, log_path=None, **kwargs):
    strategy = kwargs.pop("strategy", PROCEDURAL)
    confusion = kwargs.pop("speaker_confusion", 0.0)
    config = SessionConfig(strategy=strategy, seed=kwargs.pop("seed", 42), **kwargs)
    return GameSession(
        config, registry=registry, speaker_confusion=confusion, log_path=log_path
    )


TABLE1_TEXTS = [
    ("P1", "I'm pretty sure it is not Antigua and Barbuda."),
    ("P2", "Yeah no way it's Antigua and Barbuda."),
    ("P1", "I would rather go for Christmas Island, what do you think?"),
    ("P2", "Sure, let's go for Christmas Island"),
]


def play_table1_question(session):
    outcomes = [session.post(speaker, text) for speaker, text in TABLE1_TEXTS]
    return outcomes


def test_opening_question_is_realized(registry):
    session = make_session(registry)
    assert "the flag of" in session.opening_utterance
    assert session.state.round == 0


def test_worked_dialogue_reaches_confirmation(registry):
    session = make_session(
        registry,
        scripted_questions=(Question("CX", ("CX", "MS", "CZ", "AG")),),
    )
    outcomes = play_table1_question(session)
    assert all(not o.utterances for o in outcomes[:3])
    final = outcomes[-1]
    assert [a.act for a in final.actions] == ["confirm_answer"]
    assert "final answer?" in final.utterances[0]
    assert "Christmas Island" in final.utterances[0]


def test_full_game_to_announcement(registry):
    session = make_session(registry, answer_threshold=2)
    rounds_played = 0
    while not session.finished:
        target_name = registry.name_of(session.state.question.target)
        session.post("P1", f"I think it's {target_name}")
        session.post("P2", f"Yes, {target_name}!")
        outcome = session.post("P1", "yes")
        rounds_played += 1
        assert rounds_played <= 3
    assert rounds_played == 3
    assert session.state.score == 3
    final_acts = [a.act for a in outcome.actions]
    assert final_acts == ["feedback_correct", "announce_result"]
    assert "win" in outcome.utterances[-1].lower()


def test_log_file_has_one_line_per_event(registry, tmp_path):
    log_path = tmp_path / "game.jsonl"
    session = make_session(registry, log_path=log_path)
    session.post("P1", "I think it's France")
    session.post("P2", "no")
    lines = log_path.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 3  # opening + two turns
    opening = json.loads(lines[0])
    assert opening["speaker"] == "system"
    record = json.loads(lines[1])
    assert record["turn_id"] == 1
    assert record["nlu"]["intent"] == "give_answer"
    assert "strategy_state" in record["state"]


def test_speaker_confusion_flips_labels_deterministically(registry):
    def observed_labels(confusion):
        session = make_session(
            registry, strategy=DIARISED, speaker_confusion=confusion, seed=7
        )
        outcomes = [
            session.post("P1" if i % 2 == 0 else "P2", "the weather is nice")
            for i in range(40)
        ]
        return [o.observed_speaker for o in outcomes]

    clean = observed_labels(0.0)
    noisy_a = observed_labels(1.0)
    noisy_b = observed_labels(0.5)
    assert clean == ["P1", "P2"] * 20
    assert noisy_a == ["P2", "P1"] * 20
    assert noisy_b == observed_labels(0.5)  # same seed, same flips
    assert noisy_b != clean


def test_confusion_out_of_range_rejected(registry):
    with pytest.raises(ConfigurationError):
        make_session(registry, speaker_confusion=1.5)


def test_same_seed_same_transcript_same_realizations(registry):
    def run():
        session = make_session(registry, answer_threshold=2)
        texts = [session.opening_utterance]
        target = registry.name_of(session.state.question.target)
        for speaker, text in (("P1", target), ("P2", target), ("P1", "yes")):
            texts.extend(session.post(speaker, text).utterances)
        return texts

    assert run() == run()
