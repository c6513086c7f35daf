"""Bundled defaults and the prompt-generation configuration surface.

Every formatting knob that is a matter of convention rather than of logic —
instruction texts, the dependency-label word map, the common-word ranks used
to order neighbor lists, separators, the end-of-sequence marker — lives in
config so it can be tuned without touching code. A config directory may
override any bundled table by shipping a file of the same name.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Mapping

STYLE_NL = "nl"
STYLE_SYMBOL = "symbol"
STYLE_NONE = "none"
STYLES = (STYLE_NL, STYLE_SYMBOL, STYLE_NONE)

ORDER_COMMON_LAST = "common_last"
ORDER_POSITION = "position"
NEIGHBOR_ORDERS = (ORDER_COMMON_LAST, ORDER_POSITION)

DEFAULT_SEPARATOR = " | "
DEFAULT_EMPTY_LITERAL = "none"
DEFAULT_END_MARKER = "<|end_of_sentence|>"

_INSTRUCTIONS_FILE = "instructions.json"
_RELATION_WORDS_FILE = "relation_words.json"
_COMMON_WORDS_FILE = "common_words.json"
_SETTINGS_FILE = "settings.json"


def _bundled(name: str):
    return json.loads(resources.files("synquad").joinpath("data", name).read_text("utf-8"))


@lru_cache(maxsize=None)
def default_instructions() -> Mapping[str, str]:
    return dict(_bundled(_INSTRUCTIONS_FILE))


@lru_cache(maxsize=None)
def default_relation_words() -> Mapping[str, str]:
    return dict(_bundled(_RELATION_WORDS_FILE))


@lru_cache(maxsize=None)
def default_common_word_ranks() -> Mapping[str, int]:
    """Word -> frequency rank (1 = most common) from the bundled list."""
    words = _bundled(_COMMON_WORDS_FILE)
    return {word: rank for rank, word in enumerate(words, start=1)}


@dataclass(frozen=True)
class PromptConfig:
    """Everything prompt generation needs beyond the sentence graph itself."""

    style: str = STYLE_NL
    hops: int = 1
    separator: str = DEFAULT_SEPARATOR
    empty_literal: str = DEFAULT_EMPTY_LITERAL
    end_marker: str = DEFAULT_END_MARKER
    neighbor_order: str = ORDER_COMMON_LAST
    instructions: Mapping[str, str] = field(default_factory=default_instructions)
    relation_words: Mapping[str, str] = field(default_factory=default_relation_words)
    common_word_ranks: Mapping[str, int] = field(default_factory=default_common_word_ranks)

    def __post_init__(self) -> None:
        if self.style not in STYLES:
            raise ValueError(f"style must be one of {STYLES}, got {self.style!r}")
        if self.hops < 1:
            raise ValueError(f"hops must be >= 1, got {self.hops}")
        if self.neighbor_order not in NEIGHBOR_ORDERS:
            raise ValueError(f"neighbor_order must be one of {NEIGHBOR_ORDERS}, got {self.neighbor_order!r}")


_SCALAR_SETTINGS = ("style", "hops", "separator", "empty_literal", "end_marker", "neighbor_order")


def load_prompt_config(config_dir: str | Path | None = None, **overrides) -> PromptConfig:
    """Build a PromptConfig from bundled defaults, an optional config directory,
    and keyword overrides, in that precedence order.
    """
    config = PromptConfig()
    if config_dir is not None:
        config_dir = Path(config_dir)
        updates: dict = {}
        instructions_path = config_dir / _INSTRUCTIONS_FILE
        if instructions_path.exists():
            merged = dict(default_instructions())
            merged.update(json.loads(instructions_path.read_text("utf-8")))
            updates["instructions"] = merged
        relation_path = config_dir / _RELATION_WORDS_FILE
        if relation_path.exists():
            updates["relation_words"] = dict(json.loads(relation_path.read_text("utf-8")))
        common_path = config_dir / _COMMON_WORDS_FILE
        if common_path.exists():
            words = json.loads(common_path.read_text("utf-8"))
            updates["common_word_ranks"] = {w: r for r, w in enumerate(words, start=1)}
        settings_path = config_dir / _SETTINGS_FILE
        if settings_path.exists():
            settings = json.loads(settings_path.read_text("utf-8"))
            unknown = set(settings) - set(_SCALAR_SETTINGS)
            if unknown:
                raise ValueError(f"unknown settings keys in {settings_path}: {sorted(unknown)}")
            updates.update(settings)
        config = replace(config, **updates)
    if overrides:
        config = replace(config, **overrides)
    return config
