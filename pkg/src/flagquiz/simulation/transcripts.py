"""Speaker-labeled transcripts with gold annotations, plus label noise.

File format is JSON Lines: the first line is the meta record (ids plus the
question script for each round), every following line is one player turn.
Turns carry the true speaker, an observed speaker (defaults to the true one),
the raw text and the gold annotations used for scoring.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, replace
from pathlib import Path
from typing import IO

from ..registry import Question

AGREEMENT = "agreement"
DISAGREEMENT = "disagreement"


class TranscriptError(ValueError):
    """Schema violation; the message names the offending line."""


@dataclass(frozen=True)
class GoldEvent:
    kind: str  # AGREEMENT or DISAGREEMENT
    code: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in (AGREEMENT, DISAGREEMENT):
            raise TranscriptError(f"unknown gold event kind {self.kind!r}")
        if self.kind == AGREEMENT and not self.code:
            raise TranscriptError("gold agreement needs the agreed country code")


@dataclass(frozen=True)
class TranscriptTurn:
    turn_id: int
    speaker: str
    text: str
    gold_intent: str
    observed_speaker: str = ""
    gold_entity: str | None = None
    gold_event: GoldEvent | None = None
    question_index: int = 0

    def __post_init__(self) -> None:
        if not self.observed_speaker:
            object.__setattr__(self, "observed_speaker", self.speaker)


@dataclass(frozen=True)
class TranscriptMeta:
    group_id: str
    game_id: str
    questions: tuple[Question, ...]
    strategy_hint: str | None = None


@dataclass(frozen=True)
class Transcript:
    meta: TranscriptMeta
    turns: tuple[TranscriptTurn, ...]

    def speakers(self) -> tuple[str, ...]:
        return tuple(sorted({turn.speaker for turn in self.turns}))

    def agreement_by_question(self) -> dict[int, tuple[int, str]]:
        """question_index -> (gold agreement turn id, agreed code)."""
        out: dict[int, tuple[int, str]] = {}
        for turn in self.turns:
            event = turn.gold_event
            if event is not None and event.kind == AGREEMENT:
                out.setdefault(turn.question_index, (turn.turn_id, event.code))
        return out


def _parse_meta(payload: dict, line_no: int) -> TranscriptMeta:
    try:
        questions = tuple(
            Question(
                target=q["target"],
                options=tuple(q["options"]),
                question_index=i,
            )
            for i, q in enumerate(payload["questions"])
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise TranscriptError(f"line {line_no}: bad question script: {exc}") from exc
    if not questions:
        raise TranscriptError(f"line {line_no}: transcript needs at least one question")
    return TranscriptMeta(
        group_id=str(payload.get("group_id", "")),
        game_id=str(payload.get("game_id", "")),
        questions=questions,
        strategy_hint=payload.get("strategy_hint"),
    )


def _parse_turn(payload: dict, line_no: int, n_questions: int) -> TranscriptTurn:
    for key in ("turn_id", "speaker", "text", "gold_intent"):
        if key not in payload:
            raise TranscriptError(f"line {line_no}: turn is missing {key!r}")
    event = None
    if payload.get("gold_event") is not None:
        raw = payload["gold_event"]
        try:
            event = GoldEvent(kind=raw["kind"], code=raw.get("code"))
        except (KeyError, TypeError, TranscriptError) as exc:
            raise TranscriptError(f"line {line_no}: bad gold event: {exc}") from exc
    gold_entity = payload.get("gold_entity")
    if gold_entity is not None and payload["gold_intent"] != "give_answer":
        raise TranscriptError(
            f"line {line_no}: gold entity requires gold intent give_answer"
        )
    question_index = int(payload.get("question_index", 0))
    if not 0 <= question_index < n_questions:
        raise TranscriptError(
            f"line {line_no}: question_index {question_index} has no script"
        )
    return TranscriptTurn(
        turn_id=int(payload["turn_id"]),
        speaker=str(payload["speaker"]),
        observed_speaker=str(payload.get("observed_speaker", "")),
        text=str(payload["text"]),
        gold_intent=str(payload["gold_intent"]),
        gold_entity=gold_entity,
        gold_event=event,
        question_index=question_index,
    )


def parse_transcript(source: str | Path | IO[str]) -> Transcript:
    """Parse and validate one JSONL transcript."""
    if hasattr(source, "read"):
        raw = source.read()
    else:
        raw = Path(source).read_text(encoding="utf-8")
    lines = [line for line in raw.splitlines() if line.strip()]
    if not lines:
        raise TranscriptError("empty transcript")
    records = []
    for line_no, line in enumerate(lines, start=1):
        try:
            records.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise TranscriptError(f"line {line_no}: invalid JSON: {exc}") from exc
    meta = _parse_meta(records[0], 1)
    turns = []
    previous_id = None
    previous_question = 0
    for line_no, payload in enumerate(records[1:], start=2):
        turn = _parse_turn(payload, line_no, len(meta.questions))
        if previous_id is not None and turn.turn_id <= previous_id:
            raise TranscriptError(
                f"line {line_no}: turn ids must be strictly increasing"
            )
        if turn.question_index < previous_question:
            raise TranscriptError(
                f"line {line_no}: question_index must be non-decreasing"
            )
        previous_id = turn.turn_id
        previous_question = turn.question_index
        turns.append(turn)
    if not turns:
        raise TranscriptError("transcript has no turns")
    return Transcript(meta=meta, turns=tuple(turns))


def transcript_to_jsonl(transcript: Transcript) -> str:
    meta = transcript.meta
    lines = [
        json.dumps(
            {
                "group_id": meta.group_id,
                "game_id": meta.game_id,
                "strategy_hint": meta.strategy_hint,
                "questions": [
                    {"target": q.target, "options": list(q.options)}
                    for q in meta.questions
                ],
            },
            ensure_ascii=False,
        )
    ]
    for turn in transcript.turns:
        record: dict = {
            "turn_id": turn.turn_id,
            "speaker": turn.speaker,
            "observed_speaker": turn.observed_speaker,
            "text": turn.text,
            "gold_intent": turn.gold_intent,
            "question_index": turn.question_index,
        }
        if turn.gold_entity is not None:
            record["gold_entity"] = turn.gold_entity
        if turn.gold_event is not None:
            record["gold_event"] = {"kind": turn.gold_event.kind, "code": turn.gold_event.code}
        lines.append(json.dumps(record, ensure_ascii=False))
    return "\n".join(lines) + "\n"


def write_transcript(transcript: Transcript, path: str | Path) -> None:
    Path(path).write_text(transcript_to_jsonl(transcript), encoding="utf-8")


@dataclass(frozen=True)
class NoiseModel:
    """Independent per-turn speaker-label substitution."""

    p_confusion: float
    seed: int | None = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.p_confusion <= 1.0:
            raise ValueError("confusion probability must be in [0, 1]")


def apply_noise(transcript: Transcript, model: NoiseModel) -> Transcript:
    """Flip each turn's observed speaker with probability ``p_confusion``.

    Gold annotations and true speakers are untouched. Requires exactly two
    distinct true speakers; deterministic for a fixed seed.
    """
    speakers = transcript.speakers()
    if len(speakers) != 2:
        raise ValueError(
            f"noise model supports exactly 2 speakers, transcript has {len(speakers)}"
        )
    first, second = speakers
    rng = random.Random(model.seed)
    turns = []
    for turn in transcript.turns:
        observed = turn.observed_speaker
        if rng.random() < model.p_confusion:
            if observed == first:
                observed = second
            elif observed == second:
                observed = first
        turns.append(replace(turn, observed_speaker=observed))
    return Transcript(meta=transcript.meta, turns=tuple(turns))


def bundled_transcript_path(name: str) -> Path:
    from ..registry import data_path

    return data_path(str(Path("transcripts") / name))
