"""Long-running predictor speaking the line-oriented JSONL protocol.

One prompt record in, one response record out, order preserved, one line
each. The model loads before any input is read, so a broken adapter fails
the process with a nonzero exit without consuming the stream. A malformed
input line yields an error record for that line and processing continues.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import IO

import torch

from .config import TrainConfig
from .lora import apply_lora, load_lora_state
from .model import build_tiny_model, is_tiny, load_pretrained
from .train import ADAPTER_FILE, CONFIG_FILE, VOCAB_FILE, TokenizerCodec, VocabCodec
from .vocab import CharVocab

STUB_OUTPUT = "none"


class LoadedPredictor:
    """An adapter artifact rebuilt into a generate-ready model."""

    def __init__(self, model, codec, config: TrainConfig, max_new_tokens: int):
        self.model = model
        self.codec = codec
        self.config = config
        self.max_new_tokens = max_new_tokens
        self.model.eval()

    @classmethod
    def load(cls, adapter_dir: str | Path, *, max_new_tokens: int = 256) -> "LoadedPredictor":
        adapter = Path(adapter_dir)
        config_path = adapter / CONFIG_FILE
        if not config_path.is_file():
            raise FileNotFoundError(f"no {CONFIG_FILE} in {adapter}")
        config = TrainConfig(**json.loads(config_path.read_text(encoding="utf-8")))
        if is_tiny(config.base_model):
            vocab = CharVocab.load(adapter / VOCAB_FILE)
            model = build_tiny_model(config.base_model, vocab)
            codec = VocabCodec(vocab)
        else:
            model, tokenizer = load_pretrained(config.base_model)
            codec = TokenizerCodec(tokenizer)
        apply_lora(model, config.lora_rank, config.lora_alpha, config.lora_dropout)
        state = torch.load(adapter / ADAPTER_FILE, map_location="cpu", weights_only=True)
        load_lora_state(model, state)
        return cls(model, codec, config, max_new_tokens)

    def generate(self, prompt: str) -> str:
        ids = [self.codec.bos_id, *self.codec.encode(prompt)]
        input_ids = torch.tensor([ids], dtype=torch.long)
        with torch.no_grad():
            generated = self.model.generate(
                input_ids,
                max_new_tokens=self.max_new_tokens,
                num_beams=self.config.beam_size,
                do_sample=False,
                pad_token_id=self.codec.pad_id,
                eos_token_id=self.codec.eos_id,
            )
        return self.codec.decode(generated[0][len(ids):].tolist())


def _prompt_text(record: dict) -> str:
    return f"{record.get('instruction', '')}\n{record.get('input', '')}\n"


def _respond(record: dict, raw_output: str) -> dict:
    return {
        "sentence_id": record.get("sentence_id", ""),
        "task": record.get("task", ""),
        "raw_output": raw_output,
    }


def serve_lines(
    predictor: LoadedPredictor | None,
    stdin: IO[str] | None = None,
    stdout: IO[str] | None = None,
) -> int:
    """Handle the stream; predictor None means stub mode. Returns line count."""
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    handled = 0
    for line in stdin:
        line = line.strip()
        if not line:
            continue
        handled += 1
        sentence_id = ""
        try:
            record = json.loads(line)
            if not isinstance(record, dict):
                raise ValueError("prompt record must be a JSON object")
            sentence_id = str(record.get("sentence_id", ""))
            if not sentence_id:
                raise ValueError("prompt record is missing sentence_id")
            if predictor is None:
                response = _respond(record, STUB_OUTPUT)
            else:
                response = _respond(record, predictor.generate(_prompt_text(record)))
        except Exception as err:  # Per-line fault isolation for the protocol.
            response = {"sentence_id": sentence_id, "error": str(err)}
        stdout.write(json.dumps(response, ensure_ascii=False) + "\n")
        stdout.flush()
    return handled
