"""Cooperative flag-quiz game master.

A text-first quiz host for two players: it shows a flag, listens to the
players' discussion, detects when they have agreed on one of four options and
asks them to confirm. Two interchangeable agreement strategies are provided,
one counting answer repetitions and one tracking each speaker's current
answer, together with a replay/metrics harness and a live play service.
"""
from .dialogue import (
    DIARISED,
    PROCEDURAL,
    AgentAction,
    ConfigurationError,
    DialogueState,
    DiarisedAgreementState,
    ProceduralAgreementState,
    SessionConfig,
    SessionStateError,
    advance_round,
    diarised_check,
    handle_utterance,
    new_session,
    procedural_check,
)
from .nlu import NluConfig, NluResult, classify, extract_country
from .registry import (
    CountryRecord,
    CountryRegistry,
    Question,
    RegistryError,
    UnknownCountryError,
    flag_glyph,
    generate_question,
    get_clue,
    load_default_registry,
    load_registry,
    normalize,
)
from .session import GameSession, TurnOutcome

__version__ = "0.1.0"

__all__ = [
    "AgentAction",
    "ConfigurationError",
    "CountryRecord",
    "CountryRegistry",
    "DIARISED",
    "DialogueState",
    "DiarisedAgreementState",
    "GameSession",
    "NluConfig",
    "NluResult",
    "PROCEDURAL",
    "ProceduralAgreementState",
    "Question",
    "RegistryError",
    "SessionConfig",
    "SessionStateError",
    "TurnOutcome",
    "UnknownCountryError",
    "advance_round",
    "classify",
    "diarised_check",
    "extract_country",
    "flag_glyph",
    "generate_question",
    "get_clue",
    "handle_utterance",
    "load_default_registry",
    "load_registry",
    "new_session",
    "normalize",
    "procedural_check",
]
