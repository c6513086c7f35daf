"""Supervised fine-tuning with low-rank adapters.

Loss is computed on target tokens only (prompt tokens are masked), gradients
accumulate across micro-batches, and the learning rate follows the configured
schedule. The artifact directory holds the adapter weights plus everything a
serving process needs to rebuild the model.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Callable, Sequence

import torch
from transformers import get_scheduler

from .config import TrainConfig
from .data import Example, read_examples, training_texts
from .lora import apply_lora, lora_state_dict, trainable_parameters
from .model import build_tiny_model, is_tiny, load_pretrained
from .vocab import CharVocab

ADAPTER_FILE = "adapter.pt"
VOCAB_FILE = "vocab.json"
CONFIG_FILE = "train_config.json"
META_FILE = "meta.json"


class VocabCodec:
    """Char-level encoding for the seeded tiny model."""

    def __init__(self, vocab: CharVocab):
        self.vocab = vocab
        self.pad_id = vocab.pad_id
        self.bos_id = vocab.bos_id
        self.eos_id = vocab.eos_id

    def encode(self, text: str) -> list[int]:
        return self.vocab.encode(text)

    def decode(self, ids: Sequence[int]) -> str:
        return self.vocab.decode(ids)


class TokenizerCodec:
    """Checkpoint tokenizer wrapper with the same surface as VocabCodec."""

    def __init__(self, tokenizer):
        self.tokenizer = tokenizer
        self.pad_id = tokenizer.pad_token_id
        self.bos_id = tokenizer.bos_token_id or tokenizer.eos_token_id
        self.eos_id = tokenizer.eos_token_id

    def encode(self, text: str) -> list[int]:
        return self.tokenizer.encode(text, add_special_tokens=False)

    def decode(self, ids: Sequence[int]) -> str:
        ids = list(ids)
        if self.eos_id in ids:
            ids = ids[: ids.index(self.eos_id)]
        return self.tokenizer.decode(ids, skip_special_tokens=True)


def _load_model_and_codec(config: TrainConfig, examples: Sequence[Example]):
    if is_tiny(config.base_model):
        vocab = CharVocab.build(e.text for e in examples)
        return build_tiny_model(config.base_model, vocab), VocabCodec(vocab)
    model, tokenizer = load_pretrained(config.base_model)
    return model, TokenizerCodec(tokenizer)


def _encode_example(example: Example, codec, limit: int) -> tuple[list[int], list[int]]:
    prompt_ids = [codec.bos_id, *codec.encode(example.prompt)]
    target_ids = [*codec.encode(example.output), codec.eos_id]
    room = limit - len(target_ids)
    if room < 1:
        raise ValueError(
            f"example {example.sentence_id}: target alone exceeds the context window"
        )
    prompt_ids = prompt_ids[-room:]
    ids = prompt_ids + target_ids
    labels = [-100] * len(prompt_ids) + target_ids
    return ids, labels


def _batches(rows: Sequence[tuple[list[int], list[int]]], batch_size: int, pad_id: int):
    for start in range(0, len(rows), batch_size):
        chunk = rows[start : start + batch_size]
        width = max(len(ids) for ids, _ in chunk)
        input_ids = torch.full((len(chunk), width), pad_id, dtype=torch.long)
        labels = torch.full((len(chunk), width), -100, dtype=torch.long)
        mask = torch.zeros((len(chunk), width), dtype=torch.long)
        for row, (ids, row_labels) in enumerate(chunk):
            input_ids[row, : len(ids)] = torch.tensor(ids, dtype=torch.long)
            labels[row, : len(row_labels)] = torch.tensor(row_labels, dtype=torch.long)
            mask[row, : len(ids)] = 1
        yield input_ids, labels, mask


def train(
    dataset_paths: Sequence[str | Path],
    config: TrainConfig,
    out_dir: str | Path,
    *,
    max_length: int = 1024,
    log: Callable[[str], None] = print,
) -> Path:
    """Fine-tune and write an adapter artifact; returns its directory.

    Dataset files are concatenated in the order given, so the caller controls
    the multi-task curriculum.
    """
    examples = read_examples(dataset_paths)
    training_texts(examples)  # Validates targets before any model work.

    model, codec = _load_model_and_codec(config, examples)
    wrapped = apply_lora(model, config.lora_rank, config.lora_alpha, config.lora_dropout)
    log(f"wrapped {wrapped} projection layers with rank-{config.lora_rank} adapters")

    rows = [_encode_example(e, codec, max_length) for e in examples]
    steps_per_epoch = -(-len(rows) // config.batch_size)
    optimizer_steps_per_epoch = -(-steps_per_epoch // config.gradient_accumulation_steps)
    total_steps = optimizer_steps_per_epoch * config.num_train_epochs
    optimizer = torch.optim.AdamW(trainable_parameters(model), lr=config.learning_rate)
    scheduler = get_scheduler(
        config.lr_scheduler_type, optimizer, num_warmup_steps=0, num_training_steps=total_steps
    )

    model.train()
    epoch_losses: list[float] = []
    for epoch in range(1, config.num_train_epochs + 1):
        running = 0.0
        batches = 0
        optimizer.zero_grad()
        for index, (input_ids, labels, mask) in enumerate(
            _batches(rows, config.batch_size, codec.pad_id), start=1
        ):
            outputs = model(input_ids=input_ids, attention_mask=mask, labels=labels)
            loss = outputs.loss / config.gradient_accumulation_steps
            loss.backward()
            running += float(outputs.loss.detach())
            batches += 1
            if index % config.gradient_accumulation_steps == 0 or index == steps_per_epoch:
                optimizer.step()
                scheduler.step()
                optimizer.zero_grad()
        epoch_loss = running / batches
        epoch_losses.append(epoch_loss)
        log(f"epoch {epoch}/{config.num_train_epochs}: loss {epoch_loss:.4f}")

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    torch.save(lora_state_dict(model), out / ADAPTER_FILE)
    if isinstance(codec, VocabCodec):
        codec.vocab.save(out / VOCAB_FILE)
    (out / CONFIG_FILE).write_text(json.dumps(config.to_dict(), indent=2), encoding="utf-8")
    (out / META_FILE).write_text(
        json.dumps(
            {
                "examples": len(examples),
                "dataset_files": [str(p) for p in dataset_paths],
                "epoch_losses": epoch_losses,
                "wrapped_projections": wrapped,
            },
            indent=2,
        ),
        encoding="utf-8",
    )
    return out
