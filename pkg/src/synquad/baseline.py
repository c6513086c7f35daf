"""Deterministic predictors that exercise the pipeline without a model.

Every predictor maps an InstructionExample (empty output field) to raw
output text. The same work can run out of process over the JSONL protocol:
prompt objects {sentence_id, task, instruction, input, output} on stdin, one
response {sentence_id, task, raw_output} per prompt on stdout, order
preserved; a line that cannot be handled yields {sentence_id, error}.
"""

from __future__ import annotations

import json
import shlex
import subprocess
import sys
from dataclasses import dataclass, field
from typing import IO, Iterable, Mapping, Sequence

from .config import PromptConfig
from .corpus import NULL_LITERAL, SentenceGraph
from .decode import parse_records
from .errors import ProtocolError
from .promptgen import (
    AO,
    OA,
    ASPECT,
    OPINION,
    InstructionExample,
    TaskKind,
    generate,
)
from .syntax import MODIFY, relation_word


class BasePredictor:
    """Shared batch plumbing; subclasses implement predict()."""

    def predict(self, example: InstructionExample) -> str:
        raise NotImplementedError

    def predict_many(self, examples: Sequence[InstructionExample]) -> list[str]:
        return [self.predict(e) for e in examples]


def graphs_by_id(graphs: Iterable[SentenceGraph]) -> dict[str, SentenceGraph]:
    return {g.sentence_id: g for g in graphs}


@dataclass
class GoldReplayPredictor(BasePredictor):
    """Oracle: emits exactly the training target for the prompt's task."""

    graphs: Mapping[str, SentenceGraph] | Iterable[SentenceGraph]
    config: PromptConfig

    def __post_init__(self) -> None:
        if not isinstance(self.graphs, Mapping):
            self.graphs = graphs_by_id(self.graphs)

    def predict(self, example: InstructionExample) -> str:
        try:
            graph = self.graphs[example.sentence_id]
        except KeyError:
            raise ProtocolError(f"unknown sentence_id {example.sentence_id!r}") from None
        replay = generate(graph, example.task, self.config, training=True)
        return replay.output + self.config.end_marker


def heuristic_extract(graph: SentenceGraph, relation_words: Mapping[str, str] | None = None, direction: str = AO) -> str:
    """One pair per modifier edge, head as aspect and dependent as opinion,
    in clause order.
    """
    records = []
    for edge in sorted(graph.edges, key=lambda e: e.dependent):
        if edge.head == 0 or relation_word(edge.label, relation_words) != MODIFY:
            continue
        aspect = graph.tokens[edge.head - 1].surface
        opinion = graph.tokens[edge.dependent - 1].surface
        if direction == AO:
            records.append(f"aspect: {aspect}, opinion: {opinion}")
        else:
            records.append(f"opinion: {opinion}, aspect: {aspect}")
    return " | ".join(records) if records else "none"


def _last_line_value(text: str, prefix: str) -> str | None:
    for line in reversed(text.splitlines()):
        if line.startswith(prefix):
            return line[len(prefix):].strip()
    return None


@dataclass
class HeuristicPredictor(BasePredictor):
    """Syntax-rule extractor with fixed-label classification.

    Extraction pairs come from modifier edges; classification echoes the
    prompt's candidates with constant category/sentiment labels. Reads
    tokens and edges only, never gold quads.
    """

    graphs: Mapping[str, SentenceGraph] | Iterable[SentenceGraph]
    config: PromptConfig
    default_category: str = "general"
    default_sentiment: str = "negative"

    def __post_init__(self) -> None:
        if not isinstance(self.graphs, Mapping):
            self.graphs = graphs_by_id(self.graphs)

    def _graph(self, example: InstructionExample) -> SentenceGraph:
        try:
            return self.graphs[example.sentence_id]
        except KeyError:
            raise ProtocolError(f"unknown sentence_id {example.sentence_id!r}") from None

    def _modify_partner(self, graph: SentenceGraph, term: str) -> str:
        """First modifier dependent of the term's tokens, if the term anchors."""
        from .promptgen import locate_term

        span = locate_term(graph, term) if term != NULL_LITERAL else None
        if span is None:
            return NULL_LITERAL
        own = set(range(span.begin, span.end + 1))
        for edge in sorted(graph.edges, key=lambda e: e.dependent):
            if edge.head in own and edge.dependent not in own:
                if relation_word(edge.label, self.config.relation_words) == MODIFY:
                    return graph.tokens[edge.dependent - 1].surface
        return NULL_LITERAL

    def predict(self, example: InstructionExample) -> str:
        task = example.task
        if task in (TaskKind.EXTRACT_AO, TaskKind.EXTRACT_OA):
            direction = AO if task is TaskKind.EXTRACT_AO else OA
            return heuristic_extract(self._graph(example), self.config.relation_words, direction)
        if task in (TaskKind.LINK_A_TO_O, TaskKind.LINK_O_TO_A):
            return self._predict_link(example)
        if task is TaskKind.CLASSIFY_PAIR:
            return self._predict_pair_classification(example)
        return self._predict_node_classification(example)

    def _predict_link(self, example: InstructionExample) -> str:
        graph = self._graph(example)
        given = ASPECT if example.task is TaskKind.LINK_A_TO_O else OPINION
        other = OPINION if given == ASPECT else ASPECT
        listing = _last_line_value(example.input, "candidates:")
        if listing is None or listing == self.config.empty_literal:
            return self.config.empty_literal
        records, _ = parse_records(listing, (given,), end_marker=self.config.end_marker)
        out = []
        for record in records:
            term = record[given]
            partner = self._modify_partner(graph, term)
            out.append(f"{given}: {term}, {other}: {partner}")
        return " | ".join(out) if out else self.config.empty_literal

    def _predict_pair_classification(self, example: InstructionExample) -> str:
        listing = _last_line_value(example.input, "candidate:")
        if listing is None or listing == self.config.empty_literal:
            return self.config.empty_literal
        records, _ = parse_records(listing, (ASPECT, OPINION), end_marker=self.config.end_marker)
        out = [
            f"aspect: {r[ASPECT]}, opinion: {r[OPINION]}, "
            f"category: {self.default_category}, sentiment: {self.default_sentiment}"
            for r in records
        ]
        return " | ".join(out) if out else self.config.empty_literal

    def _predict_node_classification(self, example: InstructionExample) -> str:
        task = example.task
        element = ASPECT if task in (TaskKind.CLASSIFY_A_TO_C, TaskKind.CLASSIFY_A_TO_S) else OPINION
        target = "category" if task in (TaskKind.CLASSIFY_A_TO_C, TaskKind.CLASSIFY_O_TO_C) else "sentiment"
        label = self.default_category if target == "category" else self.default_sentiment
        listing = _last_line_value(example.input, f"candidate {element}:")
        if listing is None or listing == self.config.empty_literal:
            return self.config.empty_literal
        terms = [t.strip() for t in listing.split("|")]
        out = [f"{element}: {term}, {target}: {label}" for term in terms if term]
        return " | ".join(out) if out else self.config.empty_literal


def prompt_record(example: InstructionExample) -> dict:
    record = example.to_record()
    record["output"] = ""
    return record


@dataclass
class SubprocessPredictor(BasePredictor):
    """Runs an external command once per batch over the JSONL protocol."""

    command: Sequence[str]

    @classmethod
    def from_spec(cls, spec: str) -> "SubprocessPredictor":
        return cls(tuple(shlex.split(spec)))

    def predict(self, example: InstructionExample) -> str:
        return self.predict_many([example])[0]

    def predict_many(self, examples: Sequence[InstructionExample]) -> list[str]:
        payload = "".join(json.dumps(prompt_record(e), ensure_ascii=False) + "\n" for e in examples)
        result = subprocess.run(
            list(self.command),
            input=payload,
            capture_output=True,
            text=True,
        )
        if result.returncode != 0:
            raise ProtocolError(
                f"predictor command {self.command!r} exited {result.returncode}: {result.stderr.strip()[:500]}"
            )
        lines = [line for line in result.stdout.splitlines() if line.strip()]
        if len(lines) != len(examples):
            raise ProtocolError(f"expected {len(examples)} response lines, got {len(lines)}")
        outputs = []
        for example, line in zip(examples, lines):
            try:
                response = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ProtocolError(f"unparseable response line: {exc}") from None
            if response.get("sentence_id") != example.sentence_id:
                raise ProtocolError(
                    f"response order violation: expected {example.sentence_id!r}, got {response.get('sentence_id')!r}"
                )
            if "error" in response:
                raise ProtocolError(f"predictor error for {example.sentence_id!r}: {response['error']}")
            outputs.append(str(response.get("raw_output", "")))
        return outputs


def serve_requests(predictor: BasePredictor, stdin: IO[str] | None = None, stdout: IO[str] | None = None) -> int:
    """Answer protocol requests line by line; bad lines yield error records
    and processing continues. Returns the number of lines handled.
    """
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    handled = 0
    for line in stdin:
        if not line.strip():
            continue
        handled += 1
        sentence_id = None
        try:
            request = json.loads(line)
            sentence_id = request.get("sentence_id")
            example = InstructionExample(
                task=TaskKind(request["task"]),
                instruction=request.get("instruction", ""),
                input=request.get("input", ""),
                output="",
                sentence_id=request["sentence_id"],
            )
            response = {
                "sentence_id": example.sentence_id,
                "task": example.task.value,
                "raw_output": predictor.predict(example),
            }
        except Exception as exc:  # contract: keep serving after any bad line
            response = {"sentence_id": sentence_id, "error": f"{type(exc).__name__}: {exc}"}
        stdout.write(json.dumps(response, ensure_ascii=False) + "\n")
        stdout.flush()
    return handled
