"""Command-line interface: one subcommand per pipeline stage.

Exit codes: 0 success, 1 usage or configuration error, 2 data error
(bad inputs or missing upstream artifacts), 3 internal invariant
failure.
"""

from __future__ import annotations

import argparse
import sys
import traceback

from .config import ConfigError, PipelineConfig, sample_config
from .corpus import IngestError
from . import pipeline

STAGES = ("ingest", "features", "topics", "label", "train", "evaluate", "predict-spread", "all")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # route argparse failures to exit code 1
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="newsdiffusion", description=__doc__)
    subparsers = parser.add_subparsers(dest="command", metavar="command")
    for name in STAGES:
        sub = subparsers.add_parser(name, add_help=True)
        sub.add_argument("--config", help="pipeline config JSON")
        sub.add_argument("--sample", action="store_true", help="use the bundled synthetic sample")
        sub.add_argument("--seed", type=int, help="override the config seed")
        sub.add_argument("--out-dir", help="override the config output directory")
        if name == "predict-spread":
            sub.add_argument("--text", required=True, help="tweet text to score")
            sub.add_argument("--sender", required=True, help="sender user id")
            sub.add_argument("--recipients", required=True, help="comma-separated recipient user ids")
            sub.add_argument("--model", help="trained model kind to use")
    return parser


def _load_config(args) -> PipelineConfig:
    if args.sample and args.config:
        raise UsageError("--sample and --config are mutually exclusive")
    if args.sample:
        if not args.out_dir:
            raise UsageError("--sample requires --out-dir")
        config = sample_config(args.out_dir, seed=args.seed if args.seed is not None else 42)
        return config
    if not args.config:
        raise UsageError("either --config or --sample is required")
    config = PipelineConfig.from_file(args.config)
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.out_dir is not None:
        overrides["out_dir"] = args.out_dir
    if overrides:
        merged = dict(config.raw)
        merged.update(overrides)
        config = PipelineConfig.from_dict(merged)
    return config


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise UsageError("a subcommand is required (one of: %s)" % ", ".join(STAGES))
        config = _load_config(args)
        if args.command == "ingest":
            pipeline.run_ingest(config)
        elif args.command == "features":
            pipeline.run_features(config)
        elif args.command == "topics":
            pipeline.run_topics(config)
        elif args.command == "label":
            pipeline.run_label(config)
        elif args.command == "train":
            pipeline.run_train(config)
        elif args.command == "evaluate":
            pipeline.run_evaluate(config)
        elif args.command == "predict-spread":
            recipients = [r.strip() for r in args.recipients.split(",") if r.strip()]
            pipeline.run_predict_spread(config, args.text, args.sender, recipients, args.model)
        elif args.command == "all":
            pipeline.run_all(config)
        return 0
    except (UsageError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (pipeline.DataError, IngestError, FileNotFoundError, ValueError, KeyError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except Exception:
        traceback.print_exc()
        print("internal invariant failure", file=sys.stderr)
        return 3


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
