"""Rule-based quiz session state machine with two agreement strategies.

A game is three flag questions. While a question is open the engine listens
to player utterances and decides when the players have settled on one answer:

* the frequency strategy counts answers for the current question and fires
  once the count reaches its threshold and the last two answers match, never
  looking at who spoke;
* the per-speaker strategy keeps each player's current answer and fires when
  both expected speakers hold the same one.

Detected agreement triggers a confirmation question ("is X your final
answer?"); an explicit player agreement while listening binds to the most
recent answer from anyone and triggers the same confirmation. Transitions are
pure (state in, state out) so whole games can be replayed offline.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field, replace

from . import nlu
from .registry import (
    CountryRegistry,
    Question,
    flag_glyph,
    generate_question,
    get_clue,
)

PROCEDURAL = "procedural"
DIARISED = "diarised"
STRATEGIES = (PROCEDURAL, DIARISED)

# Phases
ASKING = "asking"
LISTENING = "listening"
CONFIRMING = "confirming"
FEEDBACK = "feedback"
FINISHED = "finished"

# Agent acts
ASK_QUESTION = "ask_question"
CONFIRM_ANSWER = "confirm_answer"
GIVE_CLUE = "give_clue"
FEEDBACK_CORRECT = "feedback_correct"
FEEDBACK_INCORRECT = "feedback_incorrect"
REPEAT_QUESTION = "repeat_question"
ACKNOWLEDGE_SKIP = "acknowledge_skip"
PROMPT_CONTINUE = "prompt_continue"
ANNOUNCE_RESULT = "announce_result"


class ConfigurationError(ValueError):
    """Invalid session configuration."""


class SessionStateError(RuntimeError):
    """An utterance arrived in a phase that cannot accept one."""


@dataclass(frozen=True)
class AgentAction:
    act: str
    payload: dict

    def to_dict(self) -> dict:
        return {"act": self.act, "payload": dict(self.payload)}


@dataclass(frozen=True)
class SessionConfig:
    strategy: str = PROCEDURAL
    answer_threshold: int = 3  # answers needed before repetition counts as agreement
    clue_trigger: int = 2  # disagreement increments before the agent offers a clue
    seed: int | None = None
    speakers: tuple[str, str] = ("P1", "P2")
    rounds: int = 3
    scripted_questions: tuple[Question, ...] | None = None

    def validated(self) -> "SessionConfig":
        if self.strategy not in STRATEGIES:
            raise ConfigurationError(f"unknown strategy {self.strategy!r}")
        if self.answer_threshold < 1:
            raise ConfigurationError("answer threshold must be >= 1")
        if self.clue_trigger < 1:
            raise ConfigurationError("clue trigger must be >= 1")
        if self.rounds < 1:
            raise ConfigurationError("a game needs at least one round")
        if len(set(self.speakers)) != 2:
            raise ConfigurationError("exactly two distinct speakers expected")
        return self


@dataclass
class ProceduralAgreementState:
    """Counters for the speaker-blind strategy, reset at each new question."""

    threshold: int = 3
    answer_count: int = 0
    previous_answer: str | None = None
    latest_answer: str | None = None

    def copy(self) -> "ProceduralAgreementState":
        return replace(self)

    def snapshot(self) -> dict:
        return {
            "kind": PROCEDURAL,
            "answer_count": self.answer_count,
            "previous_answer": self.previous_answer,
            "latest_answer": self.latest_answer,
            "threshold": self.threshold,
        }


@dataclass
class DiarisedAgreementState:
    """Current answer per expected speaker, reset at each new question."""

    expected_speakers: tuple[str, str] = ("P1", "P2")
    current_answers: dict[str, str] = field(default_factory=dict)

    def copy(self) -> "DiarisedAgreementState":
        return replace(self, current_answers=dict(self.current_answers))

    def snapshot(self) -> dict:
        return {"kind": DIARISED, "current_answers": dict(self.current_answers)}


def procedural_check(state: ProceduralAgreementState) -> str | None:
    """Agreement iff enough answers were heard and the last two coincide."""
    if (
        state.answer_count >= state.threshold
        and state.previous_answer is not None
        and state.previous_answer == state.latest_answer
    ):
        return state.latest_answer
    return None


def diarised_check(state: DiarisedAgreementState) -> str | None:
    """Agreement iff both expected speakers currently hold the same answer."""
    first, second = state.expected_speakers
    a = state.current_answers.get(first)
    b = state.current_answers.get(second)
    if a is not None and a == b:
        return a
    return None


@dataclass
class DialogueState:
    config: SessionConfig
    question: Question
    strategy_state: ProceduralAgreementState | DiarisedAgreementState
    phase: str = LISTENING
    round: int = 0
    score: int = 0
    disagreement_count: int = 0
    pending_candidate: str | None = None
    clue_offered: bool = False
    system_question_pending: bool = False
    # Most recent give_answer entity from any speaker: the binding target for
    # an explicit "I agree", and the reference for differing-answer counting.
    last_answer_any: str | None = None
    last_clue: str | None = None

    def copy(self) -> "DialogueState":
        return replace(self, strategy_state=self.strategy_state.copy())

    def summary(self) -> dict:
        return {
            "phase": self.phase,
            "round": self.round,
            "score": self.score,
            "strategy": self.config.strategy,
            "disagreement_count": self.disagreement_count,
            "pending_candidate": self.pending_candidate,
            "clue_offered": self.clue_offered,
            "system_question_pending": self.system_question_pending,
            "strategy_state": self.strategy_state.snapshot(),
        }


def _fresh_strategy_state(
    config: SessionConfig,
) -> ProceduralAgreementState | DiarisedAgreementState:
    if config.strategy == PROCEDURAL:
        return ProceduralAgreementState(threshold=config.answer_threshold)
    return DiarisedAgreementState(expected_speakers=config.speakers)


def _question_for_round(
    config: SessionConfig, registry: CountryRegistry, round_index: int, rng: random.Random
) -> Question:
    scripts = config.scripted_questions
    if scripts and round_index < len(scripts):
        script = scripts[round_index]
        return replace(script, question_index=round_index)
    return generate_question(registry, round_index, rng)


def _ask_action(state: DialogueState, registry: CountryRegistry, act: str = ASK_QUESTION) -> AgentAction:
    question = state.question
    return AgentAction(
        act,
        {
            "round": state.round,
            "flag": flag_glyph(question.target),
            "options": [registry.name_of(code) for code in question.options],
            "option_codes": list(question.options),
        },
    )


def new_session(
    config: SessionConfig,
    registry: CountryRegistry,
    rng: random.Random | None = None,
) -> tuple[DialogueState, AgentAction]:
    """Start a game: round 0, listening, with the opening question emitted."""
    config = config.validated()
    if rng is None:
        rng = random.Random(config.seed)
    question = _question_for_round(config, registry, 0, rng)
    state = DialogueState(
        config=config,
        question=question,
        strategy_state=_fresh_strategy_state(config),
        phase=LISTENING,
    )
    return state, _ask_action(state, registry)


def advance_round(
    state: DialogueState, registry: CountryRegistry, rng: random.Random
) -> tuple[DialogueState, AgentAction]:
    """Move past a finished question: next round, or the final result."""
    if state.phase != FEEDBACK:
        raise SessionStateError(f"cannot advance the round from phase {state.phase!r}")
    state = state.copy()
    if state.round >= state.config.rounds - 1:
        state.phase = FINISHED
        return state, AgentAction(
            ANNOUNCE_RESULT,
            {
                "score": state.score,
                "rounds": state.config.rounds,
                "win": state.score == state.config.rounds,
            },
        )
    state.round += 1
    state.question = _question_for_round(state.config, registry, state.round, rng)
    state.strategy_state = _fresh_strategy_state(state.config)
    state.disagreement_count = 0
    state.pending_candidate = None
    state.clue_offered = False
    state.system_question_pending = False
    state.last_answer_any = None
    state.last_clue = None
    state.phase = LISTENING
    return state, _ask_action(state, registry)


def _start_confirmation(
    state: DialogueState, candidate: str, registry: CountryRegistry, actions: list[AgentAction]
) -> None:
    state.pending_candidate = candidate
    state.system_question_pending = True
    state.phase = CONFIRMING
    actions.append(
        AgentAction(
            CONFIRM_ANSWER,
            {"candidate": candidate, "candidate_name": registry.name_of(candidate)},
        )
    )


def _offer_clue(
    state: DialogueState, registry: CountryRegistry, rng: random.Random, actions: list[AgentAction]
) -> None:
    clue = get_clue(registry, state.question.target, rng, last=state.last_clue)
    state.last_clue = clue
    state.clue_offered = True
    actions.append(AgentAction(GIVE_CLUE, {"clue": clue}))


def _finish_question(
    state: DialogueState,
    registry: CountryRegistry,
    rng: random.Random,
    actions: list[AgentAction],
) -> DialogueState:
    state.phase = FEEDBACK
    state, advance_action = advance_round(state, registry, rng)
    actions.append(advance_action)
    return state


def handle_utterance(
    state: DialogueState,
    speaker: str,
    result: nlu.NluResult,
    registry: CountryRegistry,
    rng: random.Random,
) -> tuple[DialogueState, list[AgentAction]]:
    """Dispatch one classified player utterance against the current state.

    Returns the next state and the agent's actions, which may include the
    follow-up question (or final result) when the turn closes the round.
    """
    if state.phase not in (LISTENING, CONFIRMING):
        raise SessionStateError(f"cannot accept utterances in phase {state.phase!r}")
    state = state.copy()
    actions: list[AgentAction] = []
    intent = result.intent

    if intent == nlu.OUT_OF_SCOPE:
        # The agent deliberately stays silent on chatter.
        return state, actions

    if state.phase == CONFIRMING:
        if intent == nlu.AGREE:
            candidate = state.pending_candidate
            correct = candidate == state.question.target
            if correct:
                state.score += 1
            state.pending_candidate = None
            state.system_question_pending = False
            actions.append(
                AgentAction(
                    FEEDBACK_CORRECT if correct else FEEDBACK_INCORRECT,
                    {
                        "candidate": candidate,
                        "candidate_name": registry.name_of(candidate),
                        "correct": correct,
                        "score": state.score,
                    },
                )
            )
            state = _finish_question(state, registry, rng, actions)
        elif intent == nlu.DISAGREE:
            # Disconfirmation: drop the candidate and the matched pair so a
            # fresh matching pair is needed before the next detection.
            state.pending_candidate = None
            state.system_question_pending = False
            state.disagreement_count += 1
            ss = state.strategy_state
            if isinstance(ss, ProceduralAgreementState):
                ss.previous_answer = None
                ss.latest_answer = None
            else:
                ss.current_answers.clear()
            state.last_answer_any = None
            state.phase = LISTENING
        # Any other intent leaves the confirmation question outstanding.
        return state, actions

    # Listening phase.
    if intent == nlu.GIVE_ANSWER:
        entity = result.entity
        if state.last_answer_any is not None and entity != state.last_answer_any:
            state.disagreement_count += 1
        ss = state.strategy_state
        if isinstance(ss, ProceduralAgreementState):
            ss.previous_answer = ss.latest_answer
            ss.latest_answer = entity
            ss.answer_count += 1
            agreed = procedural_check(ss)
        else:
            ss.current_answers[speaker] = entity
            agreed = diarised_check(ss)
        state.last_answer_any = entity
        if agreed is not None:
            _start_confirmation(state, agreed, registry, actions)
    elif intent == nlu.AGREE:
        if state.last_answer_any is None:
            actions.append(AgentAction(PROMPT_CONTINUE, {}))
        else:
            _start_confirmation(state, state.last_answer_any, registry, actions)
    elif intent == nlu.DISAGREE:
        state.disagreement_count += 1
        if state.disagreement_count >= state.config.clue_trigger and not state.clue_offered:
            _offer_clue(state, registry, rng, actions)
    elif intent == nlu.ASK_CLUE:
        _offer_clue(state, registry, rng, actions)
    elif intent == nlu.REPEAT_QUESTION:
        actions.append(_ask_action(state, registry, act=REPEAT_QUESTION))
    elif intent == nlu.SKIP_QUESTION:
        actions.append(AgentAction(ACKNOWLEDGE_SKIP, {"round": state.round}))
        state = _finish_question(state, registry, rng, actions)
    return state, actions
