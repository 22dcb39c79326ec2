"""Synthetic two-player quiz dialogues with gold annotations.

The generator mirrors the behaviours real pairs show: ruling options out at
the start of a question, repeating their own guess for emphasis, converging
on one answer and sometimes sealing it with an explicit "I agree". Texts are
rendered from sentence frames so generated games exercise the full NLU and
dialogue pipeline, not just the agreement kernels.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path

from ..registry import CountryRegistry, generate_question
from .transcripts import (
    AGREEMENT,
    GoldEvent,
    Transcript,
    TranscriptMeta,
    TranscriptTurn,
)

DEFAULT_FRAMES: dict[str, tuple[str, ...]] = {
    "eliminate": (
        "I'm pretty sure it is not {country}.",
        "No way it's {country}.",
        "It can't be {country}.",
    ),
    "propose": (
        "I would rather go for {country}, what do you think?",
        "I think it's {country}.",
        "My guess is {country}.",
    ),
    "self_repeat": (
        "{country}, I'm telling you.",
        "I really do think it's {country}.",
        "Again: {country}.",
    ),
    "commit": (
        "Sure, let's go for {country}.",
        "Yes, let's say {country}.",
        "Alright, {country} then.",
    ),
    "reinforce": (
        "Definitely {country}.",
        "{country}!",
        "{country}, final answer.",
    ),
    "explicit_agree": (
        "Yes, I agree.",
        "I agree.",
        "Yeah, I agree with you.",
    ),
}


@dataclass(frozen=True)
class PlayerModel:
    """Behaviour probabilities plus the sentence frames players draw from."""

    p_elimination_opening: float = 0.5
    p_repeat_own: float = 0.3
    p_explicit_agree: float = 0.4
    max_reinforcements: int = 2
    frames: dict[str, tuple[str, ...]] = field(
        default_factory=lambda: dict(DEFAULT_FRAMES)
    )

    def __post_init__(self) -> None:
        for name in ("p_elimination_opening", "p_repeat_own", "p_explicit_agree"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {value}")
        if self.max_reinforcements < 0:
            raise ValueError("max_reinforcements cannot be negative")


def load_player_model(source: str | Path) -> PlayerModel:
    payload = json.loads(Path(source).read_text(encoding="utf-8"))
    frames = dict(DEFAULT_FRAMES)
    for key, value in payload.get("frames", {}).items():
        frames[key] = tuple(value)
    return PlayerModel(
        p_elimination_opening=payload.get("p_elimination_opening", 0.5),
        p_repeat_own=payload.get("p_repeat_own", 0.3),
        p_explicit_agree=payload.get("p_explicit_agree", 0.4),
        max_reinforcements=payload.get("max_reinforcements", 2),
        frames=frames,
    )


def _say(rng: random.Random, frames: tuple[str, ...], country: str | None = None) -> str:
    frame = rng.choice(frames)
    return frame.format(country=country) if country is not None else frame


def _question_turns(
    registry: CountryRegistry,
    params: PlayerModel,
    rng: random.Random,
    question_index: int,
    target: str,
    options: tuple[str, ...],
    next_turn_id: int,
    speakers: tuple[str, str],
) -> list[TranscriptTurn]:
    frames = params.frames
    proposer = rng.choice(speakers)
    partner = speakers[1] if proposer == speakers[0] else speakers[0]
    turns: list[TranscriptTurn] = []
    turn_id = next_turn_id

    def add(speaker, text, intent, entity=None, event=None):
        nonlocal turn_id
        turns.append(
            TranscriptTurn(
                turn_id=turn_id,
                speaker=speaker,
                text=text,
                gold_intent=intent,
                gold_entity=entity,
                gold_event=event,
                question_index=question_index,
            )
        )
        turn_id += 1

    if rng.random() < params.p_elimination_opening:
        wrong = rng.choice([code for code in options if code != target])
        wrong_name = registry.name_of(wrong)
        add(proposer, _say(rng, frames["eliminate"], wrong_name), "give_answer", wrong)
        add(partner, _say(rng, frames["eliminate"], wrong_name), "give_answer", wrong)

    target_name = registry.name_of(target)
    add(proposer, _say(rng, frames["propose"], target_name), "give_answer", target)
    if rng.random() < params.p_repeat_own:
        add(proposer, _say(rng, frames["self_repeat"], target_name), "give_answer", target)

    settled = GoldEvent(AGREEMENT, target)
    if rng.random() < params.p_explicit_agree:
        add(partner, _say(rng, frames["explicit_agree"]), "agree", event=settled)
    else:
        add(partner, _say(rng, frames["commit"], target_name), "give_answer", target, settled)

    for i in range(rng.randint(0, params.max_reinforcements)):
        speaker = proposer if i % 2 == 0 else partner
        add(speaker, _say(rng, frames["reinforce"], target_name), "give_answer", target)
    return turns


def synthesize_dialogues(
    registry: CountryRegistry,
    params: PlayerModel,
    n: int,
    seed: int | None = None,
    rounds: int = 3,
    speakers: tuple[str, str] = ("P1", "P2"),
) -> list[Transcript]:
    """Generate ``n`` gold-annotated games, deterministic per seed."""
    rng = random.Random(seed)
    games: list[Transcript] = []
    for game_number in range(n):
        questions = tuple(generate_question(registry, r, rng) for r in range(rounds))
        turns: list[TranscriptTurn] = []
        next_id = 1
        for question in questions:
            new_turns = _question_turns(
                registry,
                params,
                rng,
                question.question_index,
                question.target,
                question.options,
                next_id,
                speakers,
            )
            turns.extend(new_turns)
            next_id = turns[-1].turn_id + 1
        meta = TranscriptMeta(
            group_id="synthetic",
            game_id=f"game-{game_number:04d}",
            questions=questions,
        )
        games.append(Transcript(meta=meta, turns=tuple(turns)))
    return games
