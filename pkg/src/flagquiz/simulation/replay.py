"""Deterministic offline replay of transcripts through the dialogue engine.

Each turn's text goes through the real NLU and dialogue manager using the
observed speaker label. Whenever the engine asks for confirmation, the replay
answers on the players' behalf from the gold annotations: it agrees when the
candidate is the answer the players actually settled on for the transcript's
current question, and disagrees otherwise.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, replace

from .. import dialogue, nlu
from ..registry import CountryRegistry
from .transcripts import Transcript

AUTO_RESPONDER = "replay"


@dataclass(frozen=True)
class ReplayEntry:
    turn_id: int
    question_index: int
    observed_speaker: str
    text: str
    intent: str
    entity: str | None
    match_score: float | None
    disagreement_increment: bool
    strategy_snapshot: dict
    actions: tuple[dialogue.AgentAction, ...]
    auto_response: str | None
    auto_actions: tuple[dialogue.AgentAction, ...]
    engine_round: int
    engine_phase: str
    score: int

    def confirmed_candidates(self) -> list[str]:
        return [
            action.payload["candidate"]
            for action in self.actions
            if action.act == dialogue.CONFIRM_ANSWER
        ]

    def to_record(self) -> dict:
        return {
            "turn_id": self.turn_id,
            "question_index": self.question_index,
            "observed_speaker": self.observed_speaker,
            "text": self.text,
            "nlu": {
                "intent": self.intent,
                "entity": self.entity,
                "match_score": self.match_score,
            },
            "disagreement_increment": self.disagreement_increment,
            "strategy_state": self.strategy_snapshot,
            "actions": [action.to_dict() for action in self.actions],
            "auto_response": self.auto_response,
            "auto_actions": [action.to_dict() for action in self.auto_actions],
            "engine_round": self.engine_round,
            "engine_phase": self.engine_phase,
            "score": self.score,
        }


@dataclass(frozen=True)
class ReplayLog:
    strategy: str
    answer_threshold: int
    seed: int | None
    game_id: str
    entries: tuple[ReplayEntry, ...]
    final_score: int
    final_phase: str

    def first_confirmation(self) -> tuple[int, str] | None:
        """(turn id, candidate code) of the first confirmation, if any."""
        for entry in self.entries:
            candidates = entry.confirmed_candidates()
            if candidates:
                return entry.turn_id, candidates[0]
        return None

    def confirmations(self) -> list[tuple[int, int, str]]:
        """(turn id, transcript question index, candidate) for every ask."""
        out = []
        for entry in self.entries:
            for candidate in entry.confirmed_candidates():
                out.append((entry.turn_id, entry.question_index, candidate))
        return out

    def to_jsonl(self) -> str:
        header = {
            "game_id": self.game_id,
            "strategy": self.strategy,
            "answer_threshold": self.answer_threshold,
            "seed": self.seed,
            "final_score": self.final_score,
            "final_phase": self.final_phase,
        }
        lines = [json.dumps(header, ensure_ascii=False)]
        lines.extend(
            json.dumps(entry.to_record(), ensure_ascii=False) for entry in self.entries
        )
        return "\n".join(lines) + "\n"


def replay(
    transcript: Transcript,
    config: dialogue.SessionConfig,
    registry: CountryRegistry,
    nlu_config: nlu.NluConfig | None = None,
) -> ReplayLog:
    """Drive the engine with a transcript and log everything it did."""
    nlu_config = nlu_config or nlu.load_default_nlu_config()
    config = replace(config, scripted_questions=transcript.meta.questions).validated()
    rng = random.Random(config.seed)
    state, _ = dialogue.new_session(config, registry, rng)
    gold_agreements = transcript.agreement_by_question()

    entries: list[ReplayEntry] = []
    for turn in transcript.turns:
        if state.phase == dialogue.FINISHED:
            break
        result = nlu.classify(
            turn.text, registry, nlu_config, options=state.question.options
        )
        before = state.disagreement_count
        state, actions = dialogue.handle_utterance(
            state, turn.observed_speaker, result, registry, rng
        )
        increment = state.disagreement_count > before

        auto_response = None
        auto_actions: list[dialogue.AgentAction] = []
        while state.phase == dialogue.CONFIRMING:
            gold = gold_agreements.get(turn.question_index)
            agreed_code = gold[1] if gold else None
            reply = (
                nlu.AGREE
                if agreed_code is not None and state.pending_candidate == agreed_code
                else nlu.DISAGREE
            )
            auto_response = reply
            state, more = dialogue.handle_utterance(
                state,
                AUTO_RESPONDER,
                nlu.NluResult(reply),
                registry,
                rng,
            )
            auto_actions.extend(more)

        entries.append(
            ReplayEntry(
                turn_id=turn.turn_id,
                question_index=turn.question_index,
                observed_speaker=turn.observed_speaker,
                text=turn.text,
                intent=result.intent,
                entity=result.entity,
                match_score=result.match_score,
                disagreement_increment=increment,
                strategy_snapshot=state.strategy_state.snapshot(),
                actions=tuple(actions),
                auto_response=auto_response,
                auto_actions=tuple(auto_actions),
                engine_round=state.round,
                engine_phase=state.phase,
                score=state.score,
            )
        )
    return ReplayLog(
        strategy=config.strategy,
        answer_threshold=config.answer_threshold,
        seed=config.seed,
        game_id=transcript.meta.game_id,
        entries=tuple(entries),
        final_score=state.score,
        final_phase=state.phase,
    )
