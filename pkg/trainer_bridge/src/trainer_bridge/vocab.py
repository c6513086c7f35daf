"""Character-level vocabulary for the desk-scale model path.

Real checkpoints bring their own tokenizer; the tiny seeded model needs a
deterministic one that covers any corpus, so it tokenizes per character with
an unknown fallback.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

PAD = "<pad>"
BOS = "<bos>"
EOS = "<eos>"
UNK = "<unk>"
SPECIALS = (PAD, BOS, EOS, UNK)


@dataclass(frozen=True)
class CharVocab:
    symbols: tuple[str, ...]

    def __post_init__(self) -> None:
        if tuple(self.symbols[: len(SPECIALS)]) != SPECIALS:
            raise ValueError(f"vocabulary must start with {SPECIALS}")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("vocabulary has duplicate symbols")

    @classmethod
    def build(cls, texts: Iterable[str]) -> "CharVocab":
        chars = sorted({ch for text in texts for ch in text})
        return cls(SPECIALS + tuple(chars))

    @property
    def pad_id(self) -> int:
        return 0

    @property
    def bos_id(self) -> int:
        return 1

    @property
    def eos_id(self) -> int:
        return 2

    @property
    def unk_id(self) -> int:
        return 3

    def __len__(self) -> int:
        return len(self.symbols)

    def encode(self, text: str) -> list[int]:
        index = self._index
        return [index.get(ch, self.unk_id) for ch in text]

    def decode(self, ids: Iterable[int]) -> str:
        out = []
        for i in ids:
            if i == self.eos_id:
                break
            if i < len(SPECIALS):
                continue
            out.append(self.symbols[i])
        return "".join(out)

    @property
    def _index(self) -> dict[str, int]:
        cached = self.__dict__.get("_index_cache")
        if cached is None:
            cached = {s: i for i, s in enumerate(self.symbols)}
            self.__dict__["_index_cache"] = cached
        return cached

    def save(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps({"symbols": list(self.symbols)}, ensure_ascii=False), encoding="utf-8"
        )

    @classmethod
    def load(cls, path: str | Path) -> "CharVocab":
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(tuple(raw["symbols"]))
