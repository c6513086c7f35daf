"""Two-stage inference orchestration: extract, merge, classify, evaluate.

Stage 1 prompts both extraction directions for every sentence, decodes and
merges the pairs; stage 2 classifies the merged pairs of each sentence that
has any. Every stage writes its prompts, raw outputs, and decoded records
into a run-scoped directory so runs are diffable and reproducible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .config import PromptConfig
from .corpus import SentenceGraph
from .decode import PairPrediction, QuadPrediction, decode_pairs, decode_quads, merge_bidirectional, normalize
from .promptgen import (
    AO,
    OA,
    InstructionExample,
    TaskKind,
    build_dataset,
    emit_jsonl,
    gen_classification,
    locate_term,
)
from .scoring import EvalReport, MatchCounts, match_items, micro_scores

from .baseline import BasePredictor


@dataclass(frozen=True)
class PipelineConfig:
    prompt: PromptConfig = field(default_factory=PromptConfig)
    merge_strategy: str = "union"
    dedupe_predictions: bool = True
    filter_terms: bool = False
    jobs: int = 1

    def snapshot(self, predictor_label: str) -> dict:
        return {
            "predictor": predictor_label,
            "style": self.prompt.style,
            "hops": self.prompt.hops,
            "separator": self.prompt.separator,
            "empty_literal": self.prompt.empty_literal,
            "end_marker": self.prompt.end_marker,
            "neighbor_order": self.prompt.neighbor_order,
            "merge_strategy": self.merge_strategy,
            "dedupe_predictions": self.dedupe_predictions,
            "filter_terms": self.filter_terms,
        }


@dataclass(frozen=True)
class RunResult:
    quad: EvalReport
    pair: EvalReport
    out_dir: Path


@dataclass(frozen=True)
class Stage2Result:
    category_accuracy: float
    sentiment_accuracy: float
    quad: EvalReport
    aligned_sentences: int
    misaligned_sentences: int
    out_dir: Path

    def to_dict(self) -> dict:
        return {
            "category_accuracy": self.category_accuracy,
            "sentiment_accuracy": self.sentiment_accuracy,
            "quad": self.quad.to_dict(),
            "aligned_sentences": self.aligned_sentences,
            "misaligned_sentences": self.misaligned_sentences,
        }


def gold_pair_keys(graph: SentenceGraph) -> list[tuple]:
    """Normalized, dedup'd gold (aspect, opinion) keys in first-seen order."""
    keys = [
        (
            normalize(graph.surface(q.aspect_span)),
            normalize(graph.surface(q.opinion_span)),
        )
        for q in graph.quads
    ]
    return list(dict.fromkeys(keys))


def gold_quad_keys(graph: SentenceGraph) -> list[tuple]:
    """Normalized gold 4-tuples, duplicates preserved."""
    return [
        (
            normalize(graph.surface(q.aspect_span)),
            normalize(graph.surface(q.opinion_span)),
            q.category,
            q.sentiment,
        )
        for q in graph.quads
    ]


def _write_jsonl(path: Path, records: Iterable[dict]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for record in records:
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")


def _write_json(path: Path, document: dict) -> None:
    path.write_text(json.dumps(document, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


def _raw_records(examples: Sequence[InstructionExample], outputs: Sequence[str]) -> list[dict]:
    return [
        {"sentence_id": e.sentence_id, "task": e.task.value, "raw_output": out}
        for e, out in zip(examples, outputs)
    ]


def _dedupe(predictions: list, enabled: bool) -> list:
    if not enabled:
        return predictions
    seen, out = set(), []
    for prediction in predictions:
        if prediction.key() not in seen:
            seen.add(prediction.key())
            out.append(prediction)
    return out


def _filter_pairs(pairs: list[PairPrediction], graph: SentenceGraph, enabled: bool) -> list[PairPrediction]:
    if not enabled:
        return pairs
    return [
        p
        for p in pairs
        if (p.aspect is None or locate_term(graph, p.aspect)) and (p.opinion is None or locate_term(graph, p.opinion))
    ]


def _filter_quads(quads: list[QuadPrediction], graph: SentenceGraph, enabled: bool) -> list[QuadPrediction]:
    if not enabled:
        return quads
    return [
        q
        for q in quads
        if (q.aspect is None or locate_term(graph, q.aspect)) and (q.opinion is None or locate_term(graph, q.opinion))
    ]


def _run_extraction_side(
    graphs: Sequence[SentenceGraph],
    direction: str,
    predictor: BasePredictor,
    config: PipelineConfig,
    stage_dir: Path,
) -> tuple[dict[str, list[PairPrediction]], int]:
    task = TaskKind.EXTRACT_AO if direction == AO else TaskKind.EXTRACT_OA
    prompts = build_dataset(graphs, task, config.prompt, training=False)
    emit_jsonl(prompts, stage_dir / f"prompts_{task.value}.jsonl", training_mode=False)
    outputs = predictor.predict_many(prompts)
    _write_jsonl(stage_dir / f"raw_{task.value}.jsonl", _raw_records(prompts, outputs))
    decoded: dict[str, list[PairPrediction]] = {}
    malformed_total = 0
    decoded_records = []
    for prompt, output in zip(prompts, outputs):
        pairs, malformed = decode_pairs(output, direction, end_marker=config.prompt.end_marker)
        decoded[prompt.sentence_id] = pairs
        malformed_total += malformed
        decoded_records.append(
            {
                "sentence_id": prompt.sentence_id,
                "task": task.value,
                "pairs": [{"aspect": p.aspect, "opinion": p.opinion} for p in pairs],
                "malformed_count": malformed,
            }
        )
    _write_jsonl(stage_dir / f"decoded_{task.value}.jsonl", decoded_records)
    return decoded, malformed_total


def run_two_stage(
    graphs: Iterable[SentenceGraph],
    predictor: BasePredictor,
    config: PipelineConfig,
    out_dir: str | Path,
    *,
    predictor_label: str = "custom",
) -> RunResult:
    """Full extract -> merge -> classify -> evaluate run with artifacts."""
    graphs = list(graphs)
    out = Path(out_dir)
    stage1 = out / "stage1"
    stage2 = out / "stage2"
    stage1.mkdir(parents=True, exist_ok=True)
    stage2.mkdir(parents=True, exist_ok=True)
    _write_json(out / "config.json", config.snapshot(predictor_label))

    ao_pairs, ao_malformed = _run_extraction_side(graphs, AO, predictor, config, stage1)
    oa_pairs, oa_malformed = _run_extraction_side(graphs, OA, predictor, config, stage1)
    stage1_malformed = ao_malformed + oa_malformed

    merged: dict[str, list[PairPrediction]] = {}
    for graph in graphs:
        sid = graph.sentence_id
        pairs = merge_bidirectional(ao_pairs.get(sid, []), oa_pairs.get(sid, []), config.merge_strategy)
        merged[sid] = _filter_pairs(pairs, graph, config.filter_terms)
    _write_jsonl(
        stage1 / "merged_pairs.jsonl",
        [
            {
                "sentence_id": g.sentence_id,
                "pairs": [{"aspect": p.aspect, "opinion": p.opinion} for p in merged[g.sentence_id]],
            }
            for g in graphs
        ],
    )

    pair_counts = {
        g.sentence_id: match_items(gold_pair_keys(g), [p.key() for p in merged[g.sentence_id]])
        for g in graphs
    }
    pair_report = micro_scores(pair_counts, stage1_malformed)
    _write_json(stage1 / "pair_report.json", pair_report.to_dict())

    # Sentences with no merged pairs skip stage 2 and predict nothing.
    eligible = [g for g in graphs if merged[g.sentence_id]]
    stage2_prompts = [
        gen_classification(
            g,
            config.prompt,
            pairs=[(p.aspect, p.opinion) for p in merged[g.sentence_id]],
            training=False,
        )
        for g in eligible
    ]
    emit_jsonl(stage2_prompts, stage2 / "prompts_classify_pair.jsonl", training_mode=False)
    outputs = predictor.predict_many(stage2_prompts)
    _write_jsonl(stage2 / "raw_classify_pair.jsonl", _raw_records(stage2_prompts, outputs))

    decoded_quads: dict[str, list[QuadPrediction]] = {}
    stage2_malformed = 0
    decoded_records = []
    for prompt, output in zip(stage2_prompts, outputs):
        quads, malformed = decode_quads(output, end_marker=config.prompt.end_marker)
        stage2_malformed += malformed
        decoded_quads[prompt.sentence_id] = quads
        decoded_records.append(
            {
                "sentence_id": prompt.sentence_id,
                "task": prompt.task.value,
                "quads": [
                    {"aspect": q.aspect, "opinion": q.opinion, "category": q.category, "sentiment": q.sentiment}
                    for q in quads
                ],
                "malformed_count": malformed,
            }
        )
    _write_jsonl(stage2 / "decoded_classify_pair.jsonl", decoded_records)

    quad_counts: dict[str, MatchCounts] = {}
    for graph in graphs:
        predictions = decoded_quads.get(graph.sentence_id, [])
        predictions = _dedupe(predictions, config.dedupe_predictions)
        predictions = _filter_quads(predictions, graph, config.filter_terms)
        quad_counts[graph.sentence_id] = match_items(gold_quad_keys(graph), [q.key() for q in predictions])
    quad_report = micro_scores(quad_counts, stage2_malformed)

    _write_json(
        out / "report.json",
        {
            "pair": pair_report.to_dict(),
            "quad": quad_report.to_dict(),
            "stage1_malformed": stage1_malformed,
            "stage2_malformed": stage2_malformed,
        },
    )
    return RunResult(quad=quad_report, pair=pair_report, out_dir=out)


def run_stage2_isolated(
    graphs: Iterable[SentenceGraph],
    predictor: BasePredictor,
    config: PipelineConfig,
    out_dir: str | Path,
    *,
    predictor_label: str = "custom",
) -> Stage2Result:
    """Classification quality with gold pairs supplied, so element accuracy
    is positional.
    """
    graphs = list(graphs)
    out = Path(out_dir)
    stage_dir = out / "stage2_gold"
    stage_dir.mkdir(parents=True, exist_ok=True)
    _write_json(out / "config.json", config.snapshot(predictor_label))

    eligible = [g for g in graphs if g.quads]
    prompts = [
        gen_classification(
            g,
            config.prompt,
            pairs=[(q.aspect_span, q.opinion_span) for q in g.quads],
            training=False,
        )
        for g in eligible
    ]
    emit_jsonl(prompts, stage_dir / "prompts_classify_pair.jsonl", training_mode=False)
    outputs = predictor.predict_many(prompts)
    _write_jsonl(stage_dir / "raw_classify_pair.jsonl", _raw_records(prompts, outputs))

    malformed_total = 0
    category_hits = 0
    sentiment_hits = 0
    total_positions = 0
    aligned = 0
    misaligned = 0
    quad_counts: dict[str, MatchCounts] = {}
    decoded_records = []
    for graph, prompt, output in zip(eligible, prompts, outputs):
        quads, malformed = decode_quads(output, end_marker=config.prompt.end_marker)
        malformed_total += malformed
        gold_keys = gold_quad_keys(graph)
        predicted_keys = [q.key() for q in quads]
        total_positions += len(gold_keys)
        if len(predicted_keys) == len(gold_keys):
            aligned += 1
            category_hits += sum(1 for g, p in zip(gold_keys, predicted_keys) if g[2] == p[2])
            sentiment_hits += sum(1 for g, p in zip(gold_keys, predicted_keys) if g[3] == p[3])
        else:
            misaligned += 1
        deduped = _dedupe(quads, config.dedupe_predictions)
        quad_counts[graph.sentence_id] = match_items(gold_keys, [q.key() for q in deduped])
        decoded_records.append(
            {
                "sentence_id": graph.sentence_id,
                "task": prompt.task.value,
                "quads": [
                    {"aspect": q.aspect, "opinion": q.opinion, "category": q.category, "sentiment": q.sentiment}
                    for q in quads
                ],
                "malformed_count": malformed,
            }
        )
    _write_jsonl(stage_dir / "decoded_classify_pair.jsonl", decoded_records)

    quad_report = micro_scores(quad_counts, malformed_total)
    result = Stage2Result(
        category_accuracy=category_hits / total_positions if total_positions else 1.0,
        sentiment_accuracy=sentiment_hits / total_positions if total_positions else 1.0,
        quad=quad_report,
        aligned_sentences=aligned,
        misaligned_sentences=misaligned,
        out_dir=out,
    )
    _write_json(stage_dir / "report.json", result.to_dict())
    return result
