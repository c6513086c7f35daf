"""Command line interface: train, serve, echo-config."""

from __future__ import annotations

import argparse
import json
import sys

from .config import DEFAULT_PROFILE, PROFILES, TrainConfig, load_train_config
from .serve import LoadedPredictor, serve_lines
from .train import train


def _resolved_config(args: argparse.Namespace) -> TrainConfig:
    if args.config:
        return load_train_config(args.config, profile=args.profile)
    return PROFILES[args.profile]


def cmd_train(args: argparse.Namespace) -> int:
    config = _resolved_config(args)
    out = train(args.data, config, args.out)
    print(f"adapter -> {out}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    predictor = None
    if not args.stub:
        predictor = LoadedPredictor.load(args.adapter, max_new_tokens=args.max_new_tokens)
    serve_lines(predictor)
    return 0


def cmd_echo_config(args: argparse.Namespace) -> int:
    print(json.dumps(_resolved_config(args).to_dict(), indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trainer-bridge",
        description="LoRA fine-tuning and beam-search serving over instruction JSONL",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    def add_config_flags(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--profile", choices=sorted(PROFILES), default=DEFAULT_PROFILE)
        sub.add_argument("--config", default=None, help="JSON file overriding profile values")

    sub = subparsers.add_parser("train", help="fine-tune an adapter on JSONL datasets")
    sub.add_argument("--data", nargs="+", required=True, help="dataset files, curriculum order")
    sub.add_argument("--out", required=True, help="adapter artifact directory")
    add_config_flags(sub)
    sub.set_defaults(func=cmd_train)

    sub = subparsers.add_parser("serve", help="answer prompt JSONL on stdin with raw outputs")
    sub.add_argument("--adapter", default=None, help="adapter artifact directory")
    sub.add_argument("--stub", action="store_true", help="skip model loading; emit placeholder outputs")
    sub.add_argument("--max-new-tokens", type=int, default=256)
    sub.set_defaults(func=cmd_serve)

    sub = subparsers.add_parser("echo-config", help="print the resolved training configuration")
    add_config_flags(sub)
    sub.set_defaults(func=cmd_echo_config)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "serve" and not args.stub and not args.adapter:
        parser.error("serve requires --adapter unless --stub is given")
    try:
        return args.func(args)
    except (OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
