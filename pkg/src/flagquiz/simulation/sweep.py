"""Monte-Carlo comparison of the two strategies under speaker-label noise.

One synthesized corpus is replayed at each confusion probability on the grid,
once per strategy. The frequency strategy never reads speaker labels, so its
numbers stay constant across the grid; the per-speaker strategy degrades as
labels get scrambled.
"""
from __future__ import annotations

from dataclasses import dataclass

from .. import dialogue, nlu
from ..registry import CountryRegistry
from .metrics import MetricsReport, compute_metrics
from .replay import replay
from .synth import PlayerModel, synthesize_dialogues
from .transcripts import NoiseModel, Transcript, apply_noise


@dataclass(frozen=True)
class SweepRow:
    p_confusion: float
    strategy: str
    games: int
    mean_nb_turns: float
    mean_agreement_rate: float | None
    mean_disagreement_rate: float | None
    mean_intent_rate: float | None
    mean_entity_rate: float | None

    def as_row(self) -> dict[str, str]:
        return {
            "p_confusion": f"{self.p_confusion:g}",
            "strategy": self.strategy,
            "games": str(self.games),
            "mean_nb_turns": f"{self.mean_nb_turns:.2f}",
            "mean_agreement_rate": MetricsReport.format_rate(self.mean_agreement_rate),
            "mean_disagreement_rate": MetricsReport.format_rate(self.mean_disagreement_rate),
            "mean_intent_rate": MetricsReport.format_rate(self.mean_intent_rate),
            "mean_entity_rate": MetricsReport.format_rate(self.mean_entity_rate),
        }


def _mean(values: list[float]) -> float | None:
    return sum(values) / len(values) if values else None


def summarize(p_confusion: float, strategy: str, reports: list[MetricsReport]) -> SweepRow:
    """Mean of the defined per-game rates, mirroring the per-game tables."""
    return SweepRow(
        p_confusion=p_confusion,
        strategy=strategy,
        games=len(reports),
        mean_nb_turns=sum(r.nb_turns for r in reports) / len(reports),
        mean_agreement_rate=_mean(
            [r.agreement_rate for r in reports if r.agreement_rate is not None]
        ),
        mean_disagreement_rate=_mean(
            [r.disagreement_rate for r in reports if r.disagreement_rate is not None]
        ),
        mean_intent_rate=_mean(
            [r.explicit_intent_rate for r in reports if r.explicit_intent_rate is not None]
        ),
        mean_entity_rate=_mean(
            [r.entity_rate for r in reports if r.entity_rate is not None]
        ),
    )


def replay_corpus(
    corpus: list[Transcript],
    strategy: str,
    registry: CountryRegistry,
    answer_threshold: int = 3,
    nlu_config: nlu.NluConfig | None = None,
    seed: int | None = 0,
) -> list[MetricsReport]:
    nlu_config = nlu_config or nlu.load_default_nlu_config()
    reports = []
    for i, transcript in enumerate(corpus):
        config = dialogue.SessionConfig(
            strategy=strategy,
            answer_threshold=answer_threshold,
            seed=None if seed is None else seed + i,
            rounds=len(transcript.meta.questions),
        )
        log = replay(transcript, config, registry, nlu_config)
        reports.append(compute_metrics(log, transcript))
    return reports


def run_sweep(
    registry: CountryRegistry,
    params: PlayerModel,
    trials: int,
    p_grid: list[float],
    seed: int = 0,
    strategies: tuple[str, ...] = (dialogue.PROCEDURAL, dialogue.DIARISED),
    answer_threshold: int = 3,
    nlu_config: nlu.NluConfig | None = None,
) -> list[SweepRow]:
    """Synthesize once, then score every (noise level, strategy) pair."""
    nlu_config = nlu_config or nlu.load_default_nlu_config()
    corpus = synthesize_dialogues(registry, params, trials, seed=seed)
    rows = []
    for grid_index, p in enumerate(p_grid):
        noisy = [
            apply_noise(t, NoiseModel(p, seed=seed + 100_000 * (grid_index + 1) + i))
            for i, t in enumerate(corpus)
        ]
        for strategy in strategies:
            reports = replay_corpus(
                noisy,
                strategy,
                registry,
                answer_threshold=answer_threshold,
                nlu_config=nlu_config,
                seed=seed,
            )
            rows.append(summarize(p, strategy, reports))
    return rows
