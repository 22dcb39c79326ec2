"""Live game sessions: NLU, dialogue engine, NLG and logging wired together.

One :class:`GameSession` is one game. Utterance handling is strictly
serialized by the caller (console loop or server lock); separate sessions are
fully independent and can run concurrently.
"""
from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass
from pathlib import Path

from . import dialogue, nlg, nlu
from .registry import CountryRegistry, load_default_registry


@dataclass
class TurnOutcome:
    """Everything produced by one posted utterance."""

    turn_id: int
    speaker: str
    observed_speaker: str
    text: str
    result: nlu.NluResult
    actions: list[dialogue.AgentAction]
    utterances: list[str]
    state: dialogue.DialogueState

    def record(self) -> dict:
        """The game-log line for this turn (also the stream wire format)."""
        return {
            "turn_id": self.turn_id,
            "speaker": self.speaker,
            "observed_speaker": self.observed_speaker,
            "text": self.text,
            "nlu": {
                "intent": self.result.intent,
                "entity": self.result.entity,
                "match_score": self.result.match_score,
                "matched_surface": self.result.matched_surface,
            },
            "actions": [
                {**action.to_dict(), "text": text}
                for action, text in zip(self.actions, self.utterances)
            ],
            "state": self.state.summary(),
        }


class GameSession:
    """A playable session over one dialogue engine instance.

    ``speaker_confusion`` optionally flips the declared speaker label with
    the given probability before the engine sees it, so the per-speaker
    strategy's sensitivity to attribution errors can be felt live.
    """

    def __init__(
        self,
        config: dialogue.SessionConfig,
        registry: CountryRegistry | None = None,
        nlu_config: nlu.NluConfig | None = None,
        pools: dict[str, tuple[str, ...]] | None = None,
        speaker_confusion: float = 0.0,
        log_path: str | Path | None = None,
    ):
        if not 0.0 <= speaker_confusion <= 1.0:
            raise dialogue.ConfigurationError("speaker confusion must be in [0, 1]")
        self.registry = registry if registry is not None else load_default_registry()
        self.nlu_config = nlu_config or nlu.load_default_nlu_config()
        self.pools = pools or nlg.load_templates()
        self.config = config.validated()
        self.speaker_confusion = speaker_confusion
        self.rng = random.Random(config.seed)
        self._noise_rng = random.Random(
            None if config.seed is None else f"{config.seed}-noise"
        )
        self._history: dict[str, int] = {}
        self._turn_id = 0
        self._log_path = Path(log_path) if log_path else None
        self.created_at = time.time()
        self.state, opening = dialogue.new_session(self.config, self.registry, self.rng)
        self.opening_action = opening
        self.opening_utterance = self._realize(opening)
        self._write_log(
            {
                "turn_id": 0,
                "speaker": "system",
                "actions": [{**opening.to_dict(), "text": self.opening_utterance}],
                "state": self.state.summary(),
            }
        )

    @property
    def finished(self) -> bool:
        return self.state.phase == dialogue.FINISHED

    def _realize(self, action: dialogue.AgentAction) -> str:
        return nlg.realize(action, self.pools, self.rng, self._history)

    def _write_log(self, record: dict) -> None:
        if self._log_path is None:
            return
        self._log_path.parent.mkdir(parents=True, exist_ok=True)
        with self._log_path.open("a", encoding="utf-8") as handle:
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")

    def post(self, speaker: str, text: str) -> TurnOutcome:
        """Process one player utterance and return the agent's reaction."""
        observed = speaker
        if self.speaker_confusion > 0 and self._noise_rng.random() < self.speaker_confusion:
            first, second = self.config.speakers
            observed = second if speaker == first else first
        result = nlu.classify(
            text, self.registry, self.nlu_config, options=self.state.question.options
        )
        self.state, actions = dialogue.handle_utterance(
            self.state, observed, result, self.registry, self.rng
        )
        utterances = [self._realize(action) for action in actions]
        self._turn_id += 1
        outcome = TurnOutcome(
            turn_id=self._turn_id,
            speaker=speaker,
            observed_speaker=observed,
            text=text,
            result=result,
            actions=actions,
            utterances=utterances,
            state=self.state,
        )
        self._write_log(outcome.record())
        return outcome
