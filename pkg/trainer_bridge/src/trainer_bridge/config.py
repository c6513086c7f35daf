"""Training configuration with per-base-model profile defaults.

Field names match the hyperparameter config-file keys one to one, so a JSON
file with those keys loads directly. Named profiles cover the three base
models the recipe was tuned for.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True)
class TrainConfig:
    base_model: str = "Qwen/Qwen2.5-7B-Instruct"
    learning_rate: float = 5e-5
    num_train_epochs: int = 5
    lora_rank: int = 32
    lora_alpha: int = 32
    lora_dropout: float = 0.1
    batch_size: int = 4
    gradient_accumulation_steps: int = 2
    lr_scheduler_type: str = "cosine"
    beam_size: int = 4

    def __post_init__(self) -> None:
        if not self.base_model:
            raise ValueError("base_model must be non-empty")
        positive = (
            ("learning_rate", self.learning_rate),
            ("num_train_epochs", self.num_train_epochs),
            ("lora_rank", self.lora_rank),
            ("lora_alpha", self.lora_alpha),
            ("batch_size", self.batch_size),
            ("gradient_accumulation_steps", self.gradient_accumulation_steps),
        )
        for name, value in positive:
            if value <= 0:
                raise ValueError(f"{name} must be positive, got {value}")
        if not 0.0 <= self.lora_dropout < 1.0:
            raise ValueError(f"lora_dropout must be in [0, 1), got {self.lora_dropout}")
        if self.beam_size < 1:
            raise ValueError(f"beam_size must be >= 1, got {self.beam_size}")
        if self.lr_scheduler_type not in ("cosine", "constant", "linear"):
            raise ValueError(f"unknown lr_scheduler_type: {self.lr_scheduler_type!r}")

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def replace(self, **overrides) -> "TrainConfig":
        return dataclasses.replace(self, **overrides)


PROFILES: dict[str, TrainConfig] = {
    "qwen2.5-7b": TrainConfig(),
    "qwen2.5-32b": TrainConfig(
        base_model="Qwen/Qwen2.5-32B-Instruct",
        batch_size=2,
        gradient_accumulation_steps=4,
    ),
    "llama3-8b": TrainConfig(
        base_model="meta-llama/Meta-Llama-3-8B-Instruct",
        lora_rank=16,
    ),
}

DEFAULT_PROFILE = "qwen2.5-7b"


def load_train_config(path: str | Path, *, profile: str = DEFAULT_PROFILE) -> TrainConfig:
    """Load overrides from a JSON file on top of a named profile."""
    base = PROFILES[profile]
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(raw, dict):
        raise ValueError(f"{path}: config file must hold a JSON object")
    known = {f.name for f in dataclasses.fields(TrainConfig)}
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ValueError(f"{path}: unknown config keys {unknown}; known keys: {sorted(known)}")
    return base.replace(**raw)
