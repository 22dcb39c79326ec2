"""Transcript replay, label-noise modelling, metrics and Monte-Carlo sweeps."""
from .metrics import MetricsReport, compute_metrics
from .replay import ReplayEntry, ReplayLog, replay
from .synth import DEFAULT_FRAMES, PlayerModel, load_player_model, synthesize_dialogues
from .sweep import SweepRow, replay_corpus, run_sweep, summarize
from .transcripts import (
    AGREEMENT,
    DISAGREEMENT,
    GoldEvent,
    NoiseModel,
    Transcript,
    TranscriptError,
    TranscriptMeta,
    TranscriptTurn,
    apply_noise,
    bundled_transcript_path,
    parse_transcript,
    transcript_to_jsonl,
    write_transcript,
)

__all__ = [
    "AGREEMENT",
    "DISAGREEMENT",
    "DEFAULT_FRAMES",
    "GoldEvent",
    "MetricsReport",
    "NoiseModel",
    "PlayerModel",
    "ReplayEntry",
    "ReplayLog",
    "SweepRow",
    "Transcript",
    "TranscriptError",
    "TranscriptMeta",
    "TranscriptTurn",
    "apply_noise",
    "bundled_transcript_path",
    "compute_metrics",
    "load_player_model",
    "parse_transcript",
    "replay",
    "replay_corpus",
    "run_sweep",
    "summarize",
    "synthesize_dialogues",
    "transcript_to_jsonl",
    "write_transcript",
]
