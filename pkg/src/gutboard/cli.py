"""Admin CLI: seeding, model rebuilds, curation, export, and serving.

A thin client over the Platform facade — every subcommand opens the same
store the service uses, applies one atomic operation, and exits nonzero
with a message on any failure (seed files never half-apply).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import ApiConfig
from .core import Platform
from .errors import GutboardError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gutboard", description=__doc__)
    parser.add_argument("--config", help="path to JSON config file", default=None)
    parser.add_argument("--data", help="data directory (overrides config)", default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("serve", help="run the HTTP service")

    p = sub.add_parser("seed-topics", help="seed topic content from a directory of JSON docs")
    p.add_argument("dir")

    p = sub.add_parser("seed-mappings", help="seed manual tag mappings from a TSV file")
    p.add_argument("file")

    p = sub.add_parser("seed-experiments", help="seed experiment definitions from a JSON file")
    p.add_argument("file")

    p = sub.add_parser("rebuild-model", help="rebuild the routing model from topic corpora")

    p = sub.add_parser("export", help="export an experiment dataset as CSV")
    p.add_argument("experiment_id")
    p.add_argument("--out", default="-", help="output file, '-' for stdout")

    sub.add_parser("list-unmapped", help="show the unmapped-tag curation queue")

    p = sub.add_parser("approve-mapping", help="map a queued tag to a topic")
    p.add_argument("tag")
    p.add_argument("topic")

    return parser


def load_config(args: argparse.Namespace) -> ApiConfig:
    if args.config:
        config = ApiConfig.from_file(args.config)
    else:
        config = ApiConfig()
    if args.data:
        config.data_path = args.data
    return config


def run(args: argparse.Namespace) -> int:
    config = load_config(args)
    platform = Platform(config)

    if args.command == "serve":
        import uvicorn

        from .service import create_app

        platform.startup()
        app = create_app(platform)
        uvicorn.run(app, host=config.host, port=config.port, log_level="info")
        return 0

    if args.command == "seed-topics":
        count = platform.seed_topics_dir(args.dir)
        print(f"seeded {count} topics")
        return 0

    if args.command == "seed-mappings":
        count = platform.seed_mappings_file(args.file)
        print(f"seeded {count} mappings")
        return 0

    if args.command == "seed-experiments":
        count = platform.seed_experiments_file(args.file)
        print(f"seeded {count} experiments")
        return 0

    if args.command == "rebuild-model":
        model = platform.rebuild_model()
        if model is None:
            print("no corpora configured; nothing built", file=sys.stderr)
            return 1
        out = Path(config.data_path) / "model.json"
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(model.to_json(), encoding="utf-8")
        print(f"model over {len(model.vocabulary)} tokens, {len(model.centroids)} topics -> {out}")
        return 0

    if args.command == "export":
        csv_text = platform.experiments.export_dataset(args.experiment_id)
        if args.out == "-":
            sys.stdout.write(csv_text)
        else:
            Path(args.out).write_text(csv_text, encoding="utf-8", newline="")
            print(f"wrote {args.out}")
        return 0

    if args.command == "list-unmapped":
        entries = platform.router.queue_entries()
        if not entries:
            print("queue empty")
        for entry in entries:
            example = entry.example_question_id or "-"
            print(f"{entry.canonical_tag}\tcount={entry.occurrence_count}\texample={example}")
        return 0

    if args.command == "approve-mapping":
        platform.rebuild_model()  # so re-routing can use the classifier too
        result = platform.approve_mapping(None, args.tag, args.topic)
        print(
            f"mapped {result['canonical_tag']!r} -> {result['topic_id']}"
            f" (re-routed {result['rerouted_questions']} questions)"
        )
        return 0

    raise AssertionError(f"unhandled command {args.command}")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except GutboardError as exc:
        print(f"error [{exc.code}]: {exc.message}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
