"""Utterance understanding: one intent per utterance, at most one country.

Classification is deterministic: an utterance that mentions a country (by
name, alias, homophone or close misspelling of a current option) is always a
``give_answer``; everything else falls through keyword lexicons in a fixed
priority order. Negation is intentionally not handled, so "it is not France"
still answers France.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from pathlib import Path
from typing import IO, Mapping, Sequence

from .registry import CountryRegistry, data_path, normalize

GIVE_ANSWER = "give_answer"
AGREE = "agree"
DISAGREE = "disagree"
ASK_CLUE = "ask_clue"
REPEAT_QUESTION = "repeat_question"
SKIP_QUESTION = "skip_question"
OUT_OF_SCOPE = "out_of_scope"

INTENTS = (
    GIVE_ANSWER,
    AGREE,
    DISAGREE,
    ASK_CLUE,
    REPEAT_QUESTION,
    SKIP_QUESTION,
    OUT_OF_SCOPE,
)

# Keyword intents are tried in this order; a longer matched phrase beats a
# shorter one, the order below only breaks ties.
_KEYWORD_PRIORITY = (ASK_CLUE, SKIP_QUESTION, REPEAT_QUESTION, AGREE, DISAGREE)


@dataclass(frozen=True)
class NluResult:
    """Intent label plus the single extracted country, if any."""

    intent: str
    entity: str | None = None
    match_score: float | None = None
    matched_surface: str | None = None

    def __post_init__(self) -> None:
        has_entity = self.entity is not None
        if (self.intent == GIVE_ANSWER) != has_entity:
            raise ValueError("give_answer and an entity must come together")
        if has_entity != (self.match_score is not None):
            raise ValueError("match_score must accompany the entity")


@dataclass(frozen=True)
class NluConfig:
    threshold: float = 0.8
    lexicons: Mapping[str, tuple[str, ...]] = field(default_factory=dict)

    @cached_property
    def phrase_table(self) -> tuple[tuple[str, tuple[str, ...]], ...]:
        """(intent, phrase tokens) pairs, priority order, normalized once."""
        table = []
        for intent in _KEYWORD_PRIORITY:
            for phrase in self.lexicons.get(intent, ()):
                tokens = tuple(normalize(phrase).split())
                if tokens:
                    table.append((intent, tokens))
        return tuple(table)


def load_nlu_config(source: str | Path | IO[str]) -> NluConfig:
    if hasattr(source, "read"):
        payload = json.load(source)
    else:
        payload = json.loads(Path(source).read_text(encoding="utf-8"))
    lexicons = {
        intent: tuple(phrases) for intent, phrases in payload.get("lexicons", {}).items()
    }
    return NluConfig(threshold=float(payload.get("threshold", 0.8)), lexicons=lexicons)


def load_default_nlu_config() -> NluConfig:
    return load_nlu_config(data_path("nlu_config.json"))


def levenshtein(a: str, b: str) -> int:
    """Plain edit distance, two-row dynamic programme."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            cost = 0 if ca == cb else 1
            current.append(min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + cost))
        previous = current
    return previous[-1]


def _phrase_in_tokens(tokens: Sequence[str], phrase: tuple[str, ...]) -> bool:
    n = len(phrase)
    if n == 1:
        return phrase[0] in tokens
    for i in range(len(tokens) - n + 1):
        if tuple(tokens[i : i + n]) == phrase:
            return True
    return False


@lru_cache(maxsize=4096)
def _fuzzy_surfaces(registry: CountryRegistry, code: str) -> tuple[tuple[str, int], ...]:
    record = registry.get(code)
    out = []
    for surface in (record.name, *record.aliases):
        norm = normalize(surface)
        out.append((norm, len(norm.split())))
    return tuple(out)


def extract_country(
    text: str,
    registry: CountryRegistry,
    options: Sequence[str] | None = None,
    config: NluConfig | None = None,
) -> tuple[str, float, str] | None:
    """Find the single best country mention in ``text``.

    Exact surface hits (canonical name, alias or homophone, matched on whole
    token runs) score 1.0. When nothing matches exactly and the current
    options are known, token n-grams are compared against the option names by
    edit distance, scored ``1 - distance/len(name)`` and accepted at or above
    the configured threshold. Ties prefer an option, then the longest matched
    surface, then the earliest mention.

    Returns ``(code, score, matched_surface)`` or ``None``.
    """
    config = config or _default_config()
    tokens = normalize(text).split()
    if not tokens:
        return None
    option_set = set(options) if options else set()

    exact: list[tuple[str, str, int]] = []  # (code, surface, position)
    index = registry.token_index
    for i, token in enumerate(tokens):
        for surf_tokens, code, surface in index.get(token, ()):
            if tokens[i : i + len(surf_tokens)] == surf_tokens:
                exact.append((code, surface, i))
    if exact:
        code, surface, _ = min(
            exact,
            key=lambda hit: (hit[0] not in option_set, -len(hit[1]), hit[2]),
        )
        return code, 1.0, surface

    if not options:
        return None
    fuzzy: list[tuple[float, str, str, int]] = []  # (score, code, gram, position)
    slack = 1.0 - config.threshold
    for code in options:
        for surface, n_tokens in _fuzzy_surfaces(registry, code):
            length = len(surface)
            for n in range(max(1, n_tokens - 1), n_tokens + 2):
                for i in range(len(tokens) - n + 1):
                    gram = " ".join(tokens[i : i + n])
                    if abs(len(gram) - length) > slack * length:
                        continue
                    score = 1.0 - levenshtein(gram, surface) / length
                    if score >= config.threshold:
                        fuzzy.append((score, code, gram, i))
    if not fuzzy:
        return None
    score, code, gram, _ = min(fuzzy, key=lambda hit: (-hit[0], -len(hit[2]), hit[3]))
    return code, score, gram


def classify(
    text: str,
    registry: CountryRegistry,
    config: NluConfig | None = None,
    options: Sequence[str] | None = None,
) -> NluResult:
    """Classify a raw utterance. Total function: never raises on input text."""
    config = config or _default_config()
    tokens = normalize(text).split()
    if not tokens:
        return NluResult(OUT_OF_SCOPE)

    found = extract_country(text, registry, options=options, config=config)
    if found is not None:
        code, score, surface = found
        return NluResult(GIVE_ANSWER, entity=code, match_score=score, matched_surface=surface)

    best_intent = None
    best_length = 0
    for intent, phrase in config.phrase_table:
        if len(phrase) > best_length and _phrase_in_tokens(tokens, phrase):
            best_intent = intent
            best_length = len(phrase)
    return NluResult(best_intent or OUT_OF_SCOPE)


_DEFAULT_CONFIG: NluConfig | None = None


def _default_config() -> NluConfig:
    global _DEFAULT_CONFIG
    if _DEFAULT_CONFIG is None:
        _DEFAULT_CONFIG = load_default_nlu_config()
    return _DEFAULT_CONFIG
