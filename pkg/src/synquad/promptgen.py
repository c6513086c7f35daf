"""Instruction-tuning dataset generation for the nine stepwise tasks.

Stage 1 extracts (aspect, opinion) pairs bidirectionally from the sentence
plus its global dependency description; stage 2 classifies each pair into
(category, sentiment) from per-element subgraph descriptions. Auxiliary
tasks (element linking and node classification) are generated from the same
graphs. Every record renders byte-deterministically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

from .config import DEFAULT_END_MARKER, STYLE_NONE, PromptConfig
from .corpus import NULL_LITERAL, SentenceGraph, SentimentQuad, Span
from .syntax import NO_NEIGHBOR_TEMPLATE, serialize_global, serialize_subgraph

ASPECT = "aspect"
OPINION = "opinion"
CATEGORY = "category"
SENTIMENT = "sentiment"

AO = "ao"
OA = "oa"
DIRECTIONS = (AO, OA)


class TaskKind(str, Enum):
    EXTRACT_AO = "extract_ao"
    EXTRACT_OA = "extract_oa"
    LINK_A_TO_O = "link_a_to_o"
    LINK_O_TO_A = "link_o_to_a"
    CLASSIFY_PAIR = "classify_pair"
    CLASSIFY_A_TO_C = "classify_a_to_c"
    CLASSIFY_A_TO_S = "classify_a_to_s"
    CLASSIFY_O_TO_C = "classify_o_to_c"
    CLASSIFY_O_TO_S = "classify_o_to_s"


STEP1_TASKS = (TaskKind.EXTRACT_AO, TaskKind.EXTRACT_OA)
STEP2_TASKS = (TaskKind.CLASSIFY_PAIR,)
AUX_TASKS = (
    TaskKind.LINK_A_TO_O,
    TaskKind.LINK_O_TO_A,
    TaskKind.CLASSIFY_A_TO_C,
    TaskKind.CLASSIFY_A_TO_S,
    TaskKind.CLASSIFY_O_TO_C,
    TaskKind.CLASSIFY_O_TO_S,
)
ALL_TASKS = (
    TaskKind.EXTRACT_AO,
    TaskKind.EXTRACT_OA,
    TaskKind.LINK_A_TO_O,
    TaskKind.LINK_O_TO_A,
    TaskKind.CLASSIFY_PAIR,
    TaskKind.CLASSIFY_A_TO_C,
    TaskKind.CLASSIFY_A_TO_S,
    TaskKind.CLASSIFY_O_TO_C,
    TaskKind.CLASSIFY_O_TO_S,
)

TASK_SETS = {"step1": STEP1_TASKS, "step2": STEP2_TASKS, "aux": AUX_TASKS, "all": ALL_TASKS}

# (element, target) -> node-classification task
_NODE_TASKS = {
    (ASPECT, CATEGORY): TaskKind.CLASSIFY_A_TO_C,
    (ASPECT, SENTIMENT): TaskKind.CLASSIFY_A_TO_S,
    (OPINION, CATEGORY): TaskKind.CLASSIFY_O_TO_C,
    (OPINION, SENTIMENT): TaskKind.CLASSIFY_O_TO_S,
}


@dataclass(frozen=True)
class InstructionExample:
    """One (instruction, input, output) record for a named task."""

    task: TaskKind
    instruction: str
    input: str
    output: str
    sentence_id: str

    def to_record(self, *, end_marker: str = "") -> dict:
        return {
            "task": self.task.value,
            "instruction": self.instruction,
            "input": self.input,
            "output": self.output + end_marker,
            "sentence_id": self.sentence_id,
        }


# A reference to an element for subgraph/candidate rendering: a gold span,
# None for implicit, or a predicted term string carried through from stage 1.
ElementRef = Span | None | str


def _ref_surface(graph: SentenceGraph, ref: ElementRef) -> str:
    if ref is None:
        return NULL_LITERAL
    if isinstance(ref, Span):
        return graph.surface(ref)
    return ref


def locate_term(graph: SentenceGraph, term: str) -> Span | None:
    """First case-insensitive token-sequence match of a term, if any."""
    words = term.lower().split()
    if not words:
        return None
    surfaces = [t.surface.lower() for t in graph.tokens]
    width = len(words)
    for start in range(len(surfaces) - width + 1):
        if surfaces[start : start + width] == words:
            return Span(start + 1, start + width)
    return None


def subgraph_for(graph: SentenceGraph, role: str, ref: ElementRef, config: PromptConfig) -> str:
    """Subgraph sentence for a gold span or a predicted term string."""
    if isinstance(ref, str):
        span = None if ref == NULL_LITERAL else locate_term(graph, ref)
        if span is None:
            # Unanchorable predicted terms (and NULL) have no neighborhood.
            return NO_NEIGHBOR_TEMPLATE.format(role=role, surface=ref)
        ref = span
    if ref is None:
        return NO_NEIGHBOR_TEMPLATE.format(role=role, surface=NULL_LITERAL)
    return serialize_subgraph(
        graph, role, ref, config.hops, order=config.neighbor_order, ranks=config.common_word_ranks
    )


def _join_lines(lines: Iterable[str | None]) -> str:
    return "\n".join(line.rstrip() for line in lines if line is not None)


def _sentence_line(graph: SentenceGraph) -> str:
    return f"sentence: {graph.text}"


def _global_line(graph: SentenceGraph, config: PromptConfig) -> str | None:
    if config.style == STYLE_NONE:
        return None
    return f"dependency relation: {serialize_global(graph, config.style, config.relation_words)}"


def _subgraph_line(blocks: Sequence[str], config: PromptConfig) -> str | None:
    if config.style == STYLE_NONE:
        return None
    return f"subgraph: {config.separator.join(blocks) if blocks else config.empty_literal}"


def _listing(items: Sequence[str], config: PromptConfig) -> str:
    return config.separator.join(items) if items else config.empty_literal


def _pair_record(graph: SentenceGraph, quad: SentimentQuad, direction: str) -> str:
    aspect = graph.surface(quad.aspect_span)
    opinion = graph.surface(quad.opinion_span)
    if direction == AO:
        return f"aspect: {aspect}, opinion: {opinion}"
    return f"opinion: {opinion}, aspect: {aspect}"


def _pairs_output(graph: SentenceGraph, direction: str, config: PromptConfig) -> str:
    return _listing([_pair_record(graph, q, direction) for q in graph.quads], config)


def _check_direction(direction: str) -> None:
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be one of {DIRECTIONS}, got {direction!r}")


def gen_extraction(
    graph: SentenceGraph,
    direction: str,
    config: PromptConfig,
    *,
    training: bool = True,
) -> InstructionExample:
    """Stage-1 pair extraction in the given orientation."""
    _check_direction(direction)
    task = TaskKind.EXTRACT_AO if direction == AO else TaskKind.EXTRACT_OA
    return InstructionExample(
        task=task,
        instruction=config.instructions[task.value],
        input=_join_lines([_sentence_line(graph), _global_line(graph, config)]),
        output=_pairs_output(graph, direction, config) if training else "",
        sentence_id=graph.sentence_id,
    )


def gen_link(
    graph: SentenceGraph,
    direction: str,
    config: PromptConfig,
    *,
    training: bool = True,
) -> InstructionExample:
    """Element linking: one side of each gold pair is given as a candidate."""
    _check_direction(direction)
    if direction == AO:
        task, given = TaskKind.LINK_A_TO_O, ASPECT
        spans = [q.aspect_span for q in graph.quads]
    else:
        task, given = TaskKind.LINK_O_TO_A, OPINION
        spans = [q.opinion_span for q in graph.quads]
    candidates = _listing([f"{given}: {graph.surface(s)}" for s in spans], config)
    return InstructionExample(
        task=task,
        instruction=config.instructions[task.value],
        input=_join_lines(
            [_sentence_line(graph), _global_line(graph, config), f"candidates: {candidates}"]
        ),
        output=_pairs_output(graph, direction, config) if training else "",
        sentence_id=graph.sentence_id,
    )


def _quad_output(graph: SentenceGraph, config: PromptConfig) -> str:
    records = [
        f"aspect: {graph.surface(q.aspect_span)}, opinion: {graph.surface(q.opinion_span)}, "
        f"category: {q.category}, sentiment: {q.sentiment}"
        for q in graph.quads
    ]
    return _listing(records, config)


def gen_classification(
    graph: SentenceGraph,
    config: PromptConfig,
    *,
    pairs: Sequence[tuple[ElementRef, ElementRef]] | None = None,
    training: bool = True,
) -> InstructionExample:
    """Stage-2 quad classification over gold pairs (training) or given pairs."""
    if pairs is None:
        if not training:
            raise ValueError("inference-mode classification requires explicit pairs")
        pairs = [(q.aspect_span, q.opinion_span) for q in graph.quads]
    blocks = [
        f"{subgraph_for(graph, ASPECT, a, config)} {subgraph_for(graph, OPINION, o, config)}"
        for a, o in pairs
    ]
    candidates = _listing(
        [f"aspect: {_ref_surface(graph, a)}, opinion: {_ref_surface(graph, o)}" for a, o in pairs],
        config,
    )
    task = TaskKind.CLASSIFY_PAIR
    return InstructionExample(
        task=task,
        instruction=config.instructions[task.value],
        input=_join_lines(
            [_sentence_line(graph), _subgraph_line(blocks, config), f"candidate: {candidates}"]
        ),
        output=_quad_output(graph, config) if training else "",
        sentence_id=graph.sentence_id,
    )


def gen_node_classification(
    graph: SentenceGraph,
    element: str,
    target: str,
    config: PromptConfig,
    *,
    training: bool = True,
) -> InstructionExample:
    """Label each gold element with its category or sentiment."""
    try:
        task = _NODE_TASKS[(element, target)]
    except KeyError:
        raise ValueError(f"no node-classification task for element={element!r} target={target!r}") from None
    spans = [q.aspect_span if element == ASPECT else q.opinion_span for q in graph.quads]
    surfaces = [graph.surface(s) for s in spans]
    blocks = [subgraph_for(graph, element, s, config) for s in spans]
    lines = [
        _sentence_line(graph),
        _subgraph_line(blocks, config),
        f"candidate {element}: {_listing(surfaces, config)}",
    ]
    if task is TaskKind.CLASSIFY_A_TO_S:
        # This layout carries the candidate list twice; kept byte-exact to the
        # canonical template set.
        lines.append(f"candidates: {_listing([f'{ASPECT}: {s}' for s in surfaces], config)}")
    labels = [q.category if target == CATEGORY else q.sentiment for q in graph.quads]
    output = _listing(
        [f"{element}: {surface}, {target}: {label}" for surface, label in zip(surfaces, labels)],
        config,
    )
    return InstructionExample(
        task=task,
        instruction=config.instructions[task.value],
        input=_join_lines(lines),
        output=output if training else "",
        sentence_id=graph.sentence_id,
    )


def generate(
    graph: SentenceGraph,
    task: TaskKind,
    config: PromptConfig,
    *,
    training: bool = True,
    pairs: Sequence[tuple[ElementRef, ElementRef]] | None = None,
) -> InstructionExample:
    """Generate one example of any task kind for one sentence."""
    if task is TaskKind.EXTRACT_AO:
        return gen_extraction(graph, AO, config, training=training)
    if task is TaskKind.EXTRACT_OA:
        return gen_extraction(graph, OA, config, training=training)
    if task is TaskKind.LINK_A_TO_O:
        return gen_link(graph, AO, config, training=training)
    if task is TaskKind.LINK_O_TO_A:
        return gen_link(graph, OA, config, training=training)
    if task is TaskKind.CLASSIFY_PAIR:
        return gen_classification(graph, config, pairs=pairs, training=training)
    element = ASPECT if task in (TaskKind.CLASSIFY_A_TO_C, TaskKind.CLASSIFY_A_TO_S) else OPINION
    target = CATEGORY if task in (TaskKind.CLASSIFY_A_TO_C, TaskKind.CLASSIFY_O_TO_C) else SENTIMENT
    return gen_node_classification(graph, element, target, config, training=training)


def build_dataset(
    graphs: Iterable[SentenceGraph],
    task: TaskKind,
    config: PromptConfig,
    *,
    training: bool = True,
) -> list[InstructionExample]:
    """One example per sentence, corpus order preserved."""
    return [generate(g, task, config, training=training) for g in graphs]


def emit_jsonl(
    examples: Iterable[InstructionExample],
    path: str | Path,
    training_mode: bool = True,
    *,
    end_marker: str = DEFAULT_END_MARKER,
) -> int:
    """Write examples as JSONL; training mode appends the end-of-sequence marker."""
    marker = end_marker if training_mode else ""
    count = 0
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for example in examples:
            handle.write(json.dumps(example.to_record(end_marker=marker), ensure_ascii=False) + "\n")
            count += 1
    return count
