"""LoRA fine-tuning and beam-search serving bridge for instruction JSONL.

Consumes instruction-dataset JSONL files, fine-tunes a causal LM with
low-rank adapters using per-base-model hyperparameter profiles, and serves
predictions back over the line-oriented subprocess protocol.
"""

from .config import DEFAULT_PROFILE, PROFILES, TrainConfig, load_train_config
from .data import Example, SchemaError, parse_record, read_examples, training_texts
from .lora import LoRALinear, apply_lora, load_lora_state, lora_state_dict, trainable_parameters
from .model import build_tiny_model, is_tiny, load_pretrained
from .serve import LoadedPredictor, serve_lines
from .train import train
from .vocab import CharVocab

__version__ = "0.1.0"

__all__ = [
    "CharVocab",
    "DEFAULT_PROFILE",
    "Example",
    "LoRALinear",
    "LoadedPredictor",
    "PROFILES",
    "SchemaError",
    "TrainConfig",
    "apply_lora",
    "build_tiny_model",
    "is_tiny",
    "load_lora_state",
    "load_pretrained",
    "load_train_config",
    "lora_state_dict",
    "parse_record",
    "read_examples",
    "serve_lines",
    "train",
    "trainable_parameters",
    "training_texts",
    "__version__",
]
