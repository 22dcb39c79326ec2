"""Delimited report output plus rendered figures for replays and sweeps."""
from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .metrics import MetricsReport
from .sweep import SweepRow

GAME_COLUMNS = (
    "group",
    "game",
    "nb_turns",
    "agreement_rate",
    "disagreement_rate",
    "explicit_intent_rate",
    "entity_rate",
)


def game_rows(results: list[tuple[str, str, MetricsReport]]) -> list[dict[str, str]]:
    """(group id, game id, report) triples -> printable/CSV rows."""
    rows = []
    for group, game, report in results:
        row = {"group": group, "game": game}
        row.update(report.as_row())
        rows.append(row)
    if results:
        reports = [report for _, _, report in results]
        mean = {
            "group": "mean",
            "game": "",
            "nb_turns": f"{sum(r.nb_turns for r in reports) / len(reports):.2f}",
        }
        for key, attr in (
            ("agreement_rate", "agreement_rate"),
            ("disagreement_rate", "disagreement_rate"),
            ("explicit_intent_rate", "explicit_intent_rate"),
            ("entity_rate", "entity_rate"),
        ):
            values = [getattr(r, attr) for r in reports if getattr(r, attr) is not None]
            mean[key] = f"{sum(values) / len(values):.2f}" if values else "N/A"
        rows.append(mean)
    return rows


def write_game_csv(rows: list[dict[str, str]], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=GAME_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
    return path


def format_table(rows: list[dict[str, str]], columns: tuple[str, ...]) -> str:
    widths = {col: len(col) for col in columns}
    for row in rows:
        for col in columns:
            widths[col] = max(widths[col], len(str(row.get(col, ""))))
    lines = ["  ".join(col.ljust(widths[col]) for col in columns)]
    lines.append("  ".join("-" * widths[col] for col in columns))
    for row in rows:
        lines.append("  ".join(str(row.get(col, "")).ljust(widths[col]) for col in columns))
    return "\n".join(lines)


def render_game_figure(results: list[tuple[str, str, MetricsReport]], path: str | Path) -> Path:
    """Bar chart of the per-game agreement recognition rate."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    labels = [f"{group}/{game}" if group else game for group, game, _ in results]
    values = [
        report.agreement_rate if report.agreement_rate is not None else 0.0
        for _, _, report in results
    ]
    fig, ax = plt.subplots(figsize=(max(4.0, 0.8 * len(labels) + 2), 3.5))
    ax.bar(range(len(labels)), values, color="#4878a8")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=45, ha="right", fontsize=8)
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("agreement recognition rate")
    ax.set_title("Agreement recognition per game")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


SWEEP_COLUMNS = (
    "p_confusion",
    "strategy",
    "games",
    "mean_nb_turns",
    "mean_agreement_rate",
    "mean_disagreement_rate",
    "mean_intent_rate",
    "mean_entity_rate",
)


def write_sweep_csv(rows: list[SweepRow], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=SWEEP_COLUMNS)
        writer.writeheader()
        writer.writerows(row.as_row() for row in rows)
    return path


def render_sweep_figure(rows: list[SweepRow], path: str | Path) -> Path:
    """Agreement rate against label-confusion probability, one line per strategy."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(5.5, 3.8))
    strategies = sorted({row.strategy for row in rows})
    for strategy in strategies:
        points = sorted(
            (row.p_confusion, row.mean_agreement_rate)
            for row in rows
            if row.strategy == strategy and row.mean_agreement_rate is not None
        )
        ax.plot(
            [p for p, _ in points],
            [rate for _, rate in points],
            marker="o",
            label=strategy,
        )
    ax.set_xlabel("speaker confusion probability")
    ax.set_ylabel("mean agreement recognition rate")
    ax.set_ylim(0, 1.05)
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
