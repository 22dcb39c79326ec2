"""Surface realization: agent actions rendered through per-act template pools.

Each act owns a pool of phrasings; draws avoid the immediately previous
template for that act so back-to-back games do not sound scripted.
"""
from __future__ import annotations

import json
import random
from pathlib import Path
from typing import IO, Mapping

from .dialogue import AgentAction
from .registry import data_path


class TemplateError(ValueError):
    """Missing pool or placeholder that the action payload cannot fill."""


class _Payload(dict):
    def __missing__(self, key: str) -> str:
        raise TemplateError(f"unresolvable placeholder {{{key}}}")


def load_templates(source: str | Path | IO[str] | None = None) -> dict[str, tuple[str, ...]]:
    if source is None:
        source = data_path("templates.json")
    if hasattr(source, "read"):
        payload = json.load(source)
    else:
        payload = json.loads(Path(source).read_text(encoding="utf-8"))
    pools = {act: tuple(templates) for act, templates in payload.items()}
    for act, pool in pools.items():
        if not pool:
            raise TemplateError(f"empty template pool for act {act!r}")
    return pools


def render_options(names: list[str] | tuple[str, ...]) -> str:
    """Join option names as spoken: "A, B, C or D"."""
    if len(names) < 2:
        return "".join(names)
    return ", ".join(names[:-1]) + " or " + names[-1]


def _substitutions(action: AgentAction) -> _Payload:
    payload = action.payload
    values = _Payload()
    if "flag" in payload:
        values["flag"] = payload["flag"]
    if "options" in payload:
        values["options"] = render_options(payload["options"])
    if "candidate_name" in payload:
        values["candidate"] = payload["candidate_name"]
    if "clue" in payload:
        values["clue"] = payload["clue"]
    if "score" in payload:
        values["score"] = payload["score"]
    if "win" in payload:
        values["result"] = (
            "You win, congratulations!" if payload["win"] else "Better luck next time!"
        )
        values["score"] = f"{payload['score']} out of {payload['rounds']}"
    return values


def realize(
    action: AgentAction,
    pools: Mapping[str, tuple[str, ...]],
    rng: random.Random,
    history: dict[str, int],
) -> str:
    """Render one action to text, avoiding the act's previous template."""
    pool = pools.get(action.act)
    if not pool:
        raise TemplateError(f"no template pool for act {action.act!r}")
    if len(pool) == 1:
        choice = 0
    else:
        last = history.get(action.act)
        candidates = [i for i in range(len(pool)) if i != last]
        choice = rng.choice(candidates)
    history[action.act] = choice
    return pool[choice].format_map(_substitutions(action))
