"""Recognition metrics over a replay log and its gold-annotated transcript.

All four rates are correct detections over actual count. A rate whose actual
count is zero is undefined and reported as ``None`` (printed N/A), never 0.
"""
from __future__ import annotations

from dataclasses import dataclass

from .replay import ReplayLog
from .transcripts import AGREEMENT, DISAGREEMENT, Transcript


@dataclass(frozen=True)
class MetricsReport:
    nb_turns: int
    agreement_rate: float | None
    disagreement_rate: float | None
    explicit_intent_rate: float | None
    entity_rate: float | None
    agreement_detected: int = 0
    agreement_actual: int = 0
    disagreement_detected: int = 0
    disagreement_actual: int = 0

    @staticmethod
    def format_rate(rate: float | None) -> str:
        return "N/A" if rate is None else f"{rate:.2f}"

    def as_row(self) -> dict[str, str]:
        return {
            "nb_turns": str(self.nb_turns),
            "agreement_rate": self.format_rate(self.agreement_rate),
            "disagreement_rate": self.format_rate(self.disagreement_rate),
            "explicit_intent_rate": self.format_rate(self.explicit_intent_rate),
            "entity_rate": self.format_rate(self.entity_rate),
        }


def _rate(correct: int, actual: int) -> float | None:
    return None if actual == 0 else correct / actual


def compute_metrics(log: ReplayLog, transcript: Transcript) -> MetricsReport:
    """Score one replay against the transcript's gold annotations.

    An actual agreement counts as detected iff the engine asked to confirm
    the agreed answer at or after the gold agreement turn and before the
    transcript moved to the next question. An actual disagreement counts as
    detected iff the engine's disagreement counter incremented on that turn.
    """
    entries = {entry.turn_id: entry for entry in log.entries}
    transcript_ids = {turn.turn_id for turn in transcript.turns}
    if not set(entries).issubset(transcript_ids):
        raise ValueError("replay log does not belong to this transcript")

    confirmations = log.confirmations()

    agreement_actual = 0
    agreement_detected = 0
    disagreement_actual = 0
    disagreement_detected = 0
    intent_actual = 0
    intent_correct = 0
    entity_actual = 0
    entity_correct = 0

    for turn in transcript.turns:
        entry = entries.get(turn.turn_id)
        event = turn.gold_event
        if event is not None and event.kind == AGREEMENT:
            agreement_actual += 1
            hit = any(
                question_index == turn.question_index
                and turn_id >= turn.turn_id
                and candidate == event.code
                for turn_id, question_index, candidate in confirmations
            )
            if hit:
                agreement_detected += 1
        if event is not None and event.kind == DISAGREEMENT:
            disagreement_actual += 1
            if entry is not None and entry.disagreement_increment:
                disagreement_detected += 1
        if entry is None:
            continue
        intent_actual += 1
        if entry.intent == turn.gold_intent:
            intent_correct += 1
        if turn.gold_entity is not None:
            entity_actual += 1
            if entry.entity == turn.gold_entity:
                entity_correct += 1

    return MetricsReport(
        nb_turns=len(log.entries),
        agreement_rate=_rate(agreement_detected, agreement_actual),
        disagreement_rate=_rate(disagreement_detected, disagreement_actual),
        explicit_intent_rate=_rate(intent_correct, intent_actual),
        entity_rate=_rate(entity_correct, entity_actual),
        agreement_detected=agreement_detected,
        agreement_actual=agreement_actual,
        disagreement_detected=disagreement_detected,
        disagreement_actual=disagreement_actual,
    )
