"""Base model construction.

"tiny:gpt2" (optionally "tiny:gpt2:<layers>x<width>") builds a seeded
random-init GPT-2 over a supplied vocabulary so the full train/serve path
runs on CPU in seconds. Any other identifier is treated as a checkpoint name
for AutoModelForCausalLM and brings its own tokenizer.
"""

from __future__ import annotations

import hashlib

import torch
from transformers import AutoModelForCausalLM, AutoTokenizer, GPT2Config, GPT2LMHeadModel

from .vocab import CharVocab

TINY_PREFIX = "tiny:gpt2"


def is_tiny(base_model: str) -> bool:
    return base_model == TINY_PREFIX or base_model.startswith(TINY_PREFIX + ":")


def _tiny_shape(base_model: str) -> tuple[int, int]:
    if base_model == TINY_PREFIX:
        return 2, 64
    spec = base_model.removeprefix(TINY_PREFIX + ":")
    layers, _, width = spec.partition("x")
    if not layers.isdigit() or not width.isdigit() or int(layers) < 1 or int(width) < 2:
        raise ValueError(f"bad tiny model spec {base_model!r}; expected tiny:gpt2:<layers>x<width>")
    return int(layers), int(width)


def _seed_for(base_model: str, vocab_size: int) -> int:
    digest = hashlib.sha256(f"{base_model}|{vocab_size}".encode()).digest()
    return int.from_bytes(digest[:4], "big")


def build_tiny_model(base_model: str, vocab: CharVocab) -> GPT2LMHeadModel:
    """Deterministic for a given spec and vocabulary, so a serving process
    reconstructs the exact base weights the trainer adapted.
    """
    layers, width = _tiny_shape(base_model)
    config = GPT2Config(
        vocab_size=len(vocab),
        n_positions=1024,
        n_embd=width,
        n_layer=layers,
        n_head=2,
        bos_token_id=vocab.bos_id,
        eos_token_id=vocab.eos_id,
    )
    generator_state = torch.random.get_rng_state()
    try:
        torch.manual_seed(_seed_for(base_model, len(vocab)))
        model = GPT2LMHeadModel(config)
    finally:
        torch.random.set_rng_state(generator_state)
    model.config.pad_token_id = vocab.pad_id
    return model


def load_pretrained(base_model: str):
    tokenizer = AutoTokenizer.from_pretrained(base_model)
    model = AutoModelForCausalLM.from_pretrained(base_model)
    if tokenizer.pad_token_id is None:
        tokenizer.pad_token = tokenizer.eos_token
    return model, tokenizer
