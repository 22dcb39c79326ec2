"""Country registry: ISO3166 records, flag glyphs, question sampling and clues.

The registry is loaded once from a JSON file and is immutable afterwards, so a
single instance can be shared by any number of concurrent game sessions.
Random draws always come from a caller-owned ``random.Random`` stream.
"""
from __future__ import annotations

import json
import os
import random
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import IO, Iterable

_CODE_RE = re.compile(r"^[A-Z]{2}$")
_PUNCT_RE = re.compile(r"[^\w\s]")
_WS_RE = re.compile(r"\s+")

_REGIONAL_INDICATOR_BASE = 0x1F1E6

DATA_DIR_ENV = "QUIZ_DATA_DIR"


class RegistryError(ValueError):
    """Registry data is malformed (bad record, duplicate code, missing clues)."""


class UnknownCountryError(KeyError):
    """A country code or surface form does not resolve in the registry."""


def normalize(text: str) -> str:
    """Normalize a surface string for lookups.

    Punctuation becomes whitespace, internal whitespace collapses to single
    spaces, and the result is trimmed and case-folded. Both registry surfaces
    and user utterances pass through here, so the two sides always agree.
    """
    text = _PUNCT_RE.sub(" ", text)
    return _WS_RE.sub(" ", text).strip().casefold()


@dataclass(frozen=True)
class CountryRecord:
    """One ISO3166 entry with its lookup surfaces and clue pool."""

    code: str
    name: str
    aliases: tuple[str, ...] = ()
    homophones: tuple[str, ...] = ()
    clues: tuple[str, ...] = ()

    def surfaces(self) -> tuple[str, ...]:
        return (self.name, *self.aliases, *self.homophones)


@dataclass(frozen=True)
class Question:
    """One quiz round: a target country and four answer options."""

    target: str
    options: tuple[str, str, str, str]
    question_index: int = 0

    def __post_init__(self) -> None:
        if len(self.options) != 4 or len(set(self.options)) != 4:
            raise ValueError("a question needs exactly 4 distinct options")
        if self.target not in self.options:
            raise ValueError("question target must be one of the options")


class CountryRegistry:
    """Immutable country lookup by code, name, alias or homophone."""

    def __init__(self, records: Iterable[CountryRecord]):
        self._records: dict[str, CountryRecord] = {}
        self._surface_to_code: dict[str, str] = {}
        for record in records:
            self._validate(record)
            self._records[record.code] = record
        if not self._records:
            raise RegistryError("empty registry")
        # Token index for fast utterance scans: first token of each normalized
        # surface -> [(surface tokens, code, normalized surface), ...]
        self._token_index: dict[str, list[tuple[list[str], str, str]]] = {}
        for code, record in self._records.items():
            for surface in record.surfaces():
                norm = normalize(surface)
                tokens = norm.split()
                entries = self._token_index.setdefault(tokens[0], [])
                entries.append((tokens, code, norm))
        self.codes: tuple[str, ...] = tuple(self._records)

    def _validate(self, record: CountryRecord) -> None:
        label = f"{record.code or '??'} ({record.name or 'unnamed'})"
        if not _CODE_RE.match(record.code or ""):
            raise RegistryError(f"record {label}: code must match [A-Z]{{2}}")
        if record.code in self._records:
            raise RegistryError(f"record {label}: duplicate code")
        if not record.name or not normalize(record.name):
            raise RegistryError(f"record {label}: name is empty")
        if not record.clues:
            raise RegistryError(f"record {label}: clue list is empty")
        name_norm = normalize(record.name)
        for alias in record.aliases:
            if normalize(alias) == name_norm:
                raise RegistryError(
                    f"record {label}: alias {alias!r} duplicates the canonical name"
                )
        for surface in record.surfaces():
            norm = normalize(surface)
            if not norm:
                raise RegistryError(f"record {label}: blank surface {surface!r}")
            owner = self._surface_to_code.get(norm)
            if owner is not None and owner != record.code:
                raise RegistryError(
                    f"record {label}: surface {surface!r} already maps to {owner}"
                )
            self._surface_to_code[norm] = record.code

    def __len__(self) -> int:
        return len(self._records)

    def __iter__(self):
        return iter(self._records.values())

    def get(self, code: str) -> CountryRecord:
        try:
            return self._records[code]
        except KeyError:
            raise UnknownCountryError(f"unknown country code {code!r}") from None

    def name_of(self, code: str) -> str:
        return self.get(code).name

    def resolve(self, surface: str) -> str:
        """Resolve a name, alias or homophone to its country code."""
        code = self._surface_to_code.get(normalize(surface))
        if code is None:
            raise UnknownCountryError(f"{surface!r} does not name a known country")
        return code

    @property
    def token_index(self) -> dict[str, list[tuple[list[str], str, str]]]:
        return self._token_index

    @property
    def surface_map(self) -> dict[str, str]:
        return dict(self._surface_to_code)


def load_registry(source: str | Path | IO[str]) -> CountryRegistry:
    """Load a registry from a JSON array of record objects.

    Raises :class:`RegistryError` naming the offending record on malformed
    data, duplicate codes or empty clue lists.
    """
    if hasattr(source, "read"):
        raw = source.read()
    else:
        raw = Path(source).read_text(encoding="utf-8")
    if not raw.strip():
        raise RegistryError("empty registry")
    try:
        payload = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise RegistryError(f"registry is not valid JSON: {exc}") from exc
    if not isinstance(payload, list) or not payload:
        raise RegistryError("empty registry")
    records = []
    for item in payload:
        if not isinstance(item, dict):
            raise RegistryError(f"record {item!r} is not an object")
        try:
            records.append(
                CountryRecord(
                    code=item.get("code", ""),
                    name=item.get("name", ""),
                    aliases=tuple(item.get("aliases", ())),
                    homophones=tuple(item.get("homophones", ())),
                    clues=tuple(item.get("clues", ())),
                )
            )
        except TypeError as exc:
            raise RegistryError(f"record {item.get('code', item)!r}: {exc}") from exc
    return CountryRegistry(records)


def data_path(name: str) -> Path:
    """Locate a bundled data file, honouring the QUIZ_DATA_DIR override."""
    override = os.environ.get(DATA_DIR_ENV)
    if override:
        candidate = Path(override) / name
        if candidate.exists():
            return candidate
    return Path(str(resources.files("flagquiz").joinpath("data", name)))


def load_default_registry() -> CountryRegistry:
    return load_registry(data_path("countries.json"))


def flag_glyph(code: str) -> str:
    """Render a country code as its two regional-indicator code points."""
    if not isinstance(code, str) or not _CODE_RE.match(code):
        raise ValueError(f"flag code must be two uppercase ASCII letters, got {code!r}")
    return "".join(chr(_REGIONAL_INDICATOR_BASE + ord(ch) - ord("A")) for ch in code)


def glyph_to_code(glyph: str) -> str:
    """Inverse of :func:`flag_glyph`."""
    if len(glyph) != 2:
        raise ValueError("flag glyph must be exactly two regional indicators")
    letters = []
    for ch in glyph:
        offset = ord(ch) - _REGIONAL_INDICATOR_BASE
        if not 0 <= offset < 26:
            raise ValueError(f"{ch!r} is not a regional indicator")
        letters.append(chr(ord("A") + offset))
    return "".join(letters)


def generate_question(
    registry: CountryRegistry, index: int, rng: random.Random
) -> Question:
    """Draw a uniform target plus three distractors, in shuffled order."""
    codes = registry.codes
    if len(codes) < 4:
        raise RegistryError("registry must contain at least 4 countries")
    target = rng.choice(codes)
    distractors = rng.sample([c for c in codes if c != target], 3)
    options = [target, *distractors]
    rng.shuffle(options)
    return Question(target=target, options=tuple(options), question_index=index)


def get_clue(
    registry: CountryRegistry,
    code: str,
    rng: random.Random,
    last: str | None = None,
) -> str:
    """Pick a clue for ``code``, never repeating ``last`` when the pool allows.

    The caller keeps the previous clue (per question) since the registry
    itself is immutable and shared.
    """
    pool = registry.get(code).clues
    if len(pool) == 1:
        return pool[0]
    choices = [clue for clue in pool if clue != last]
    return rng.choice(choices)
