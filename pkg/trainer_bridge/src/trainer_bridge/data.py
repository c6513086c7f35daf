"""Instruction-dataset JSONL reading and schema validation.

A record is {"task", "instruction", "input", "output", "sentence_id"}, all
strings. Training files carry the target text in "output"; prompt files for
inference leave it empty.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

REQUIRED_FIELDS = ("task", "instruction", "input", "output", "sentence_id")


class SchemaError(ValueError):
    """A JSONL record does not match the instruction-dataset schema."""


@dataclass(frozen=True)
class Example:
    task: str
    instruction: str
    input: str
    output: str
    sentence_id: str

    @property
    def prompt(self) -> str:
        return f"{self.instruction}\n{self.input}\n"

    @property
    def text(self) -> str:
        return self.prompt + self.output


def parse_record(record: dict, where: str) -> Example:
    if not isinstance(record, dict):
        raise SchemaError(f"{where}: record must be a JSON object")
    missing = [f for f in REQUIRED_FIELDS if f not in record]
    if missing:
        raise SchemaError(f"{where}: missing fields {missing}")
    for field in REQUIRED_FIELDS:
        if not isinstance(record[field], str):
            raise SchemaError(f"{where}: field {field!r} must be a string")
    return Example(**{f: record[f] for f in REQUIRED_FIELDS})


def read_examples(paths: Sequence[str | Path]) -> list[Example]:
    """Read and validate one or more JSONL files, in the order given.

    The file order is the curriculum: pass step-1 files before step-2 files
    to train stages in sequence.
    """
    if not paths:
        raise SchemaError("no dataset files given")
    examples: list[Example] = []
    for path in paths:
        path = Path(path)
        with path.open("r", encoding="utf-8") as handle:
            for line_no, line in enumerate(handle, start=1):
                line = line.strip()
                if not line:
                    continue
                where = f"{path}:{line_no}"
                try:
                    record = json.loads(line)
                except json.JSONDecodeError as err:
                    raise SchemaError(f"{where}: invalid JSON: {err}") from err
                examples.append(parse_record(record, where))
    if not examples:
        raise SchemaError(f"no examples found in {', '.join(str(p) for p in paths)}")
    return examples


def training_texts(examples: Iterable[Example]) -> list[str]:
    texts = []
    for example in examples:
        if not example.output:
            raise SchemaError(
                f"example {example.sentence_id} ({example.task}) has an empty output; "
                "training needs target text"
            )
        texts.append(example.text)
    return texts
