"""Command line front end: ingest, stats, dataset generation, decoding,
evaluation, pipeline runs, ad hoc prediction, and stand-in corpus creation.

Exit codes: 0 on success, 1 on data or protocol failures, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .baseline import BasePredictor, GoldReplayPredictor, HeuristicPredictor, SubprocessPredictor
from .config import DEFAULT_END_MARKER, NEIGHBOR_ORDERS, STYLES, PromptConfig, load_prompt_config
from .corpus import align_corpus, corpus_stats, load_acos, load_conllu, save_corpus_jsonl
from .decode import decode_pairs, decode_quads, normalize
from .errors import SynquadError
from .pipeline import PipelineConfig, gold_quad_keys, run_stage2_isolated, run_two_stage
from .promptgen import (
    DIRECTIONS,
    TASK_SETS,
    InstructionExample,
    TaskKind,
    build_dataset,
    emit_jsonl,
)
from .scoring import match_items, micro_scores
from .synth import DOMAIN_DIRS, DOMAINS, write_corpus

CONFIG_DIR_ENV = "SYNQUAD_CONFIG_DIR"

# Directional view of the task inventory; step2 and node tasks have none.
_TASK_DIRECTION = {
    TaskKind.EXTRACT_AO: "ao",
    TaskKind.EXTRACT_OA: "oa",
    TaskKind.LINK_A_TO_O: "ao",
    TaskKind.LINK_O_TO_A: "oa",
}


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def _load_graphs(tsv: str, conllu: str, case_insensitive: bool = False):
    sentences = load_acos(tsv)
    parses = load_conllu(conllu)
    return align_corpus(sentences, parses, case_insensitive=case_insensitive)


def _prompt_config(args: argparse.Namespace) -> PromptConfig:
    overrides = {}
    for flag, key in (
        ("style", "style"),
        ("hops", "hops"),
        ("end_marker", "end_marker"),
        ("neighbor_order", "neighbor_order"),
    ):
        value = getattr(args, flag, None)
        if value is not None:
            overrides[key] = value
    config_dir = getattr(args, "config_dir", None) or os.environ.get(CONFIG_DIR_ENV)
    return load_prompt_config(config_dir, **overrides)


def _add_corpus_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tsv", required=True, help="annotation file, one sentence per line")
    parser.add_argument("--conllu", required=True, help="dependency parses aligned line for line")
    parser.add_argument("--case-insensitive", action="store_true", help="relax surface matching during alignment")


def _add_prompt_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--style", choices=STYLES, default=None, help="syntax serialization style")
    parser.add_argument("--hops", type=_positive_int, default=None, help="subgraph neighborhood radius")
    parser.add_argument("--end-marker", dest="end_marker", default=None, help="sequence terminator for training outputs")
    parser.add_argument("--neighbor-order", choices=NEIGHBOR_ORDERS, default=None, help="subgraph neighbor rendering order")
    parser.add_argument("--config-dir", default=None, help=f"directory of config overrides (default ${CONFIG_DIR_ENV})")


def _make_predictor(
    args: argparse.Namespace,
    parser: argparse.ArgumentParser,
    graphs,
    prompt: PromptConfig,
) -> tuple[BasePredictor, str]:
    if args.predictor == "gold":
        return GoldReplayPredictor(graphs, prompt), "gold"
    if args.predictor == "heuristic":
        return HeuristicPredictor(graphs, prompt), "heuristic"
    if not args.exec_cmd:
        parser.error("--predictor exec requires --exec-cmd")
    return SubprocessPredictor.from_spec(args.exec_cmd), f"exec:{args.exec_cmd}"


def cmd_ingest(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    graphs = _load_graphs(args.tsv, args.conllu, args.case_insensitive)
    save_corpus_jsonl(graphs, args.out)
    print(f"aligned {len(graphs)} sentences -> {args.out}")
    return 0


def cmd_stats(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    sentences = load_acos(args.tsv)
    stats = corpus_stats(sentences)
    if args.json:
        print(json.dumps(stats.to_dict(), indent=2, ensure_ascii=False))
        return 0
    print(f"sentences: {stats.sentence_count}")
    print(f"quads: {stats.quad_count}")
    print(f"implicit aspects: {stats.implicit_aspect_count}")
    print(f"implicit opinions: {stats.implicit_opinion_count}")
    print("categories:")
    for label, count in sorted(stats.category_histogram.items(), key=lambda item: (-item[1], item[0])):
        print(f"  {label}: {count}")
    print("sentiments:")
    for label, count in sorted(stats.sentiment_histogram.items(), key=lambda item: (-item[1], item[0])):
        print(f"  {label}: {count}")
    return 0


def _selected_tasks(task_arg: str, direction: str | None, parser: argparse.ArgumentParser) -> list[TaskKind]:
    tasks = list(TASK_SETS[task_arg]) if task_arg in TASK_SETS else [TaskKind(task_arg)]
    if direction is not None:
        tasks = [t for t in tasks if _TASK_DIRECTION.get(t) == direction]
        if not tasks:
            parser.error(f"--direction {direction} leaves no tasks for --task {task_arg}")
    return tasks


def cmd_build_dataset(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    graphs = _load_graphs(args.tsv, args.conllu, args.case_insensitive)
    config = _prompt_config(args)
    tasks = _selected_tasks(args.task, args.direction, parser)
    training = args.mode == "training"
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    grouped: list[InstructionExample] = []
    for task in tasks:
        examples = build_dataset(graphs, task, config, training=training)
        grouped.extend(examples)
        path = out_dir / f"{task.value}.jsonl"
        count = emit_jsonl(examples, path, training_mode=training, end_marker=config.end_marker)
        print(f"wrote {count} examples -> {path}")
    if args.task in ("step1", "step2", "aux"):
        path = out_dir / f"{args.task}.jsonl"
        count = emit_jsonl(grouped, path, training_mode=training, end_marker=config.end_marker)
        print(f"wrote {count} examples -> {path}")
    return 0


def cmd_decode(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    decoded_records = []
    malformed_total = 0
    with open(args.input, encoding="utf-8") as handle:
        for line in handle:
            if not line.strip():
                continue
            record = json.loads(line)
            raw = record.get("raw_output", record.get("output", ""))
            sentence_id = record.get("sentence_id", "")
            if args.kind == "pairs":
                pairs, malformed = decode_pairs(raw, args.direction, end_marker=args.end_marker)
                payload = {"pairs": [{"aspect": p.aspect, "opinion": p.opinion} for p in pairs]}
            else:
                quads, malformed = decode_quads(raw, end_marker=args.end_marker)
                payload = {
                    "quads": [
                        {"aspect": q.aspect, "opinion": q.opinion, "category": q.category, "sentiment": q.sentiment}
                        for q in quads
                    ]
                }
            malformed_total += malformed
            decoded_records.append({"sentence_id": sentence_id, **payload, "malformed_count": malformed})
    with open(args.out, "w", encoding="utf-8", newline="\n") as handle:
        for record in decoded_records:
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")
    print(f"decoded {len(decoded_records)} records ({malformed_total} malformed segments) -> {args.out}")
    return 0


def _prediction_key(entry: dict) -> tuple:
    def norm(field: str):
        value = entry.get(field)
        return None if value is None else normalize(value)

    return (norm("aspect"), norm("opinion"), norm("category"), norm("sentiment"))


def cmd_evaluate(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    gold = load_acos(args.gold)
    predictions: dict[str, list[tuple]] = {}
    with open(args.pred, encoding="utf-8") as handle:
        for line in handle:
            if not line.strip():
                continue
            record = json.loads(line)
            keys = [_prediction_key(entry) for entry in record.get("quads", [])]
            predictions.setdefault(record["sentence_id"], []).extend(keys)
    known_ids = {sentence.sentence_id for sentence in gold}
    unknown = [sid for sid in predictions if sid not in known_ids]
    if unknown:
        print(f"warning: {len(unknown)} predicted sentence ids missing from gold, ignored", file=sys.stderr)
    counts = {}
    for sentence in gold:
        predicted = predictions.get(sentence.sentence_id, [])
        if not args.no_dedupe:
            predicted = list(dict.fromkeys(predicted))
        counts[sentence.sentence_id] = match_items(gold_quad_keys(sentence), predicted)
    report = micro_scores(counts)
    if args.json:
        print(json.dumps(report.to_dict(), indent=2, ensure_ascii=False))
    else:
        print(report.table("quad evaluation"))
    return 0


def cmd_pipeline(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    graphs = _load_graphs(args.tsv, args.conllu, args.case_insensitive)
    config = PipelineConfig(
        prompt=_prompt_config(args),
        merge_strategy=args.merge,
        dedupe_predictions=not args.no_dedupe,
        filter_terms=args.filter_terms,
        jobs=args.jobs,
    )
    predictor, label = _make_predictor(args, parser, graphs, config.prompt)
    if args.stage2_gold:
        result = run_stage2_isolated(graphs, predictor, config, args.out_dir, predictor_label=label)
        print(result.quad.table("quad scores (gold pairs)"))
        print(f"category accuracy: {result.category_accuracy:.4f}")
        print(f"sentiment accuracy: {result.sentiment_accuracy:.4f}")
        print(f"aligned sentences: {result.aligned_sentences}, misaligned: {result.misaligned_sentences}")
    else:
        result = run_two_stage(graphs, predictor, config, args.out_dir, predictor_label=label)
        print(result.pair.table("pair scores"))
        print(result.quad.table("quad scores"))
    print(f"artifacts -> {args.out_dir}")
    return 0


def cmd_predict(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    examples = []
    with open(args.prompts, encoding="utf-8") as handle:
        for line in handle:
            if not line.strip():
                continue
            record = json.loads(line)
            examples.append(
                InstructionExample(
                    task=TaskKind(record["task"]),
                    instruction=record["instruction"],
                    input=record["input"],
                    output=record.get("output", ""),
                    sentence_id=record["sentence_id"],
                )
            )
    if args.predictor in ("gold", "heuristic"):
        if not (args.tsv and args.conllu):
            parser.error(f"--predictor {args.predictor} requires --tsv and --conllu")
        graphs = _load_graphs(args.tsv, args.conllu, args.case_insensitive)
    else:
        graphs = []
    predictor, _ = _make_predictor(args, parser, graphs, _prompt_config(args))
    outputs = predictor.predict_many(examples)
    with open(args.out, "w", encoding="utf-8", newline="\n") as handle:
        for example, raw in zip(examples, outputs):
            record = {"sentence_id": example.sentence_id, "task": example.task.value, "raw_output": raw}
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")
    print(f"predicted {len(examples)} prompts -> {args.out}")
    return 0


def cmd_make_corpus(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    domains = DOMAINS if args.domain == "all" else (args.domain,)
    for domain in domains:
        paths = write_corpus(domain, Path(args.out_dir) / DOMAIN_DIRS[domain])
        for split, (tsv_path, conllu_path) in paths.items():
            print(f"{domain}/{split}: {tsv_path} {conllu_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="synquad",
        description="Instruction datasets, decoding, and evaluation for sentiment quad prediction.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    sub = subparsers.add_parser("ingest", help="align annotations with parses and save graphs")
    _add_corpus_arguments(sub)
    sub.add_argument("--out", required=True, help="destination JSONL path")
    sub.set_defaults(func=cmd_ingest)

    sub = subparsers.add_parser("stats", help="summarize an annotation file")
    sub.add_argument("--tsv", required=True)
    sub.add_argument("--json", action="store_true", help="emit machine-readable stats")
    sub.set_defaults(func=cmd_stats)

    sub = subparsers.add_parser("build-dataset", help="generate instruction datasets")
    _add_corpus_arguments(sub)
    _add_prompt_arguments(sub)
    sub.add_argument("--out-dir", required=True)
    sub.add_argument(
        "--task",
        required=True,
        choices=[*(t.value for t in TaskKind), *TASK_SETS],
        help="one task id or a task group",
    )
    sub.add_argument("--direction", choices=DIRECTIONS, default=None, help="keep only tasks of one orientation")
    sub.add_argument("--mode", choices=("training", "inference"), default="training")
    sub.set_defaults(func=cmd_build_dataset)

    sub = subparsers.add_parser("decode", help="parse raw model outputs into structured records")
    sub.add_argument("--input", required=True, help="JSONL with raw_output fields")
    sub.add_argument("--out", required=True)
    sub.add_argument("--kind", choices=("pairs", "quads"), required=True)
    sub.add_argument("--direction", choices=DIRECTIONS, default="ao")
    sub.add_argument("--end-marker", dest="end_marker", default=DEFAULT_END_MARKER)
    sub.set_defaults(func=cmd_decode)

    sub = subparsers.add_parser("evaluate", help="score decoded quads against gold annotations")
    sub.add_argument("--gold", required=True, help="gold annotation TSV")
    sub.add_argument("--pred", required=True, help="decoded quads JSONL")
    sub.add_argument("--no-dedupe", action="store_true", help="keep duplicate predictions")
    sub.add_argument("--json", action="store_true")
    sub.set_defaults(func=cmd_evaluate)

    sub = subparsers.add_parser("pipeline", help="run two-stage inference and evaluation")
    _add_corpus_arguments(sub)
    _add_prompt_arguments(sub)
    sub.add_argument("--out-dir", required=True)
    sub.add_argument("--predictor", choices=("gold", "heuristic", "exec"), required=True)
    sub.add_argument("--exec-cmd", default=None, help="command line for --predictor exec")
    sub.add_argument("--merge", choices=("union", "intersection"), default="union")
    sub.add_argument("--no-dedupe", action="store_true")
    sub.add_argument("--filter-terms", action="store_true", help="drop predictions whose terms are not in the sentence")
    sub.add_argument("--stage2-gold", action="store_true", help="classify gold pairs instead of extracted ones")
    sub.add_argument("--jobs", type=_positive_int, default=1, help="upper bound on predictor concurrency")
    sub.set_defaults(func=cmd_pipeline)

    sub = subparsers.add_parser("predict", help="run a predictor over a prompt file")
    sub.add_argument("--prompts", required=True)
    sub.add_argument("--out", required=True)
    sub.add_argument("--predictor", choices=("gold", "heuristic", "exec"), required=True)
    sub.add_argument("--exec-cmd", default=None)
    sub.add_argument("--tsv", default=None)
    sub.add_argument("--conllu", default=None)
    sub.add_argument("--case-insensitive", action="store_true")
    _add_prompt_arguments(sub)
    sub.set_defaults(func=cmd_predict)

    sub = subparsers.add_parser("make-corpus", help="write the bundled stand-in corpora")
    sub.add_argument("--domain", choices=(*DOMAINS, "all"), required=True)
    sub.add_argument("--out-dir", required=True)
    sub.set_defaults(func=cmd_make_corpus)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except (SynquadError, OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
