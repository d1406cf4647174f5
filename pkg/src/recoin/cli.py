"""Command-line front door.

Subcommands: ingest a dump into an index snapshot, query recommendations or
completeness for an item, serve the HTTP API, analyze a session CSV export.
Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import analytics
from .errors import NotFoundError, RecoinError
from .index import build_index, read_snapshot, round_half_up, write_snapshot
from .ingest import load_dump_path, load_wikidata_dump
from .recommender import completeness, recommend
from .serialize import recommendation_dict, report_dict

USAGE_EXIT = 1
DATA_EXIT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT, f"{self.prog}: error: {message}\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="recoin", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_ingest = sub.add_parser("ingest", help="parse a dump and write an index snapshot")
    p_ingest.add_argument("dump", help="path to a newline-delimited dump")
    p_ingest.add_argument("--out", required=True, help="snapshot file to write")
    p_ingest.add_argument("--strict", action="store_true",
                          help="fail on the first malformed line")
    p_ingest.add_argument("--wikidata", action="store_true",
                          help="input is a full Wikidata-style dump")

    p_rec = sub.add_parser("recommend", help="missing-property recommendations for an item")
    p_rec.add_argument("item")
    p_rec.add_argument("--index", required=True, dest="snapshot")
    p_rec.add_argument("--limit", type=int, default=10)
    p_rec.add_argument("--format", choices=("text", "json"), default="text")

    p_comp = sub.add_parser("completeness", help="completeness report for an item")
    p_comp.add_argument("item")
    p_comp.add_argument("--index", required=True, dest="snapshot")
    p_comp.add_argument("--format", choices=("text", "json"), default="text")

    p_serve = sub.add_parser("serve", help="run the HTTP API")
    p_serve.add_argument("--index", required=True, dest="snapshot")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8080)
    p_serve.add_argument("--data-dir", default=os.environ.get("RECOIN_DATA_DIR"),
                         help="session log directory (default: $RECOIN_DATA_DIR)")
    p_serve.add_argument("--condition", default="C4",
                         help="default condition for new sessions")
    p_serve.add_argument("--ui-dir", default=None,
                         help="static web UI directory to mount under /ui")
    p_serve.add_argument("--cors", action="append", default=[],
                         help="allowed CORS origin (repeatable)")

    p_an = sub.add_parser("analyze", help="summaries and tests over a session CSV")
    p_an.add_argument("sessions", help="CSV export produced by the session log")
    p_an.add_argument("--seed", type=int, default=analytics.DEFAULT_SEED)
    p_an.add_argument("--p-method", choices=("approx", "permutation"), default="approx")
    p_an.add_argument("--permutations", type=int, default=analytics.DEFAULT_PERMUTATIONS)
    p_an.add_argument("--format", choices=("text", "json", "csv"), default="text")

    return parser


def _cmd_ingest(args) -> int:
    if args.wikidata:
        with open(args.dump, "rb") as fh:
            store = load_wikidata_dump(fh)
    else:
        store = load_dump_path(args.dump, strict=args.strict)
    index = build_index(store)
    write_snapshot(args.out, index, store)
    print(f"ingested {store.count} entities "
          f"({store.skipped} skipped, {store.duplicates} duplicates)")
    print(f"classes: {len(index.class_sizes)}  fingerprint: {index.built_from}")
    print(f"snapshot written to {args.out}")
    return 0


def _format_recommendation(rec) -> str:
    return f"{rec.property_id} {rec.display} ({rec.count} of {rec.class_size} {rec.class_id})"


def _cmd_recommend(args) -> int:
    index, store = read_snapshot(args.snapshot)
    entity = store.get(args.item)
    if entity is None:
        raise NotFoundError(f"unknown item {args.item!r}")
    recs = recommend(entity, index, limit=args.limit)
    if args.format == "json":
        print(json.dumps({
            "item_id": args.item,
            "recommendations": [recommendation_dict(r) for r in recs],
            "fingerprint": index.built_from,
        }, indent=2))
        return 0
    if not recs:
        print("item is complete relative to its class")
        return 0
    for rec in recs:
        print(_format_recommendation(rec))
    return 0


def _cmd_completeness(args) -> int:
    index, store = read_snapshot(args.snapshot)
    entity = store.get(args.item)
    if entity is None:
        raise NotFoundError(f"unknown item {args.item!r}")
    report = completeness(entity, index)
    if args.format == "json":
        print(json.dumps(report_dict(report), indent=2))
        return 0
    print(f"item: {args.item}")
    print(f"classes: {', '.join(report.classes_used) or '(none)'}")
    print(f"level: {report.level} ({report.level_label})")
    print(f"score: {round_half_up(report.score)}")
    print(f"avg_top5_missing: {round_half_up(report.avg_top5_missing)}")
    print(f"missing properties: {len(report.missing)}")
    for rec in report.missing:
        print(f"  {_format_recommendation(rec)}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import ApiConfig, create_app

    config = ApiConfig(
        snapshot_path=args.snapshot,
        host=args.host,
        port=args.port,
        data_dir=args.data_dir,
        default_condition=args.condition,
        cors_origins=args.cors,
        ui_dir=args.ui_dir,
    )
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port)
    return 0


def _cmd_analyze(args) -> int:
    with open(args.sessions, "r", encoding="utf-8") as fh:
        rows = analytics.read_session_csv(fh)
    if not rows:
        raise RecoinError("session export contains no rows")
    method = (analytics.METHOD_PERMUTATION if args.p_method == "permutation"
              else analytics.METHOD_APPROX)
    report = analytics.analyze(rows, seed=args.seed, p_method=method,
                               permutations=args.permutations)
    if args.format == "json":
        print(analytics.to_json(report))
    elif args.format == "csv":
        print(analytics.render_csv(report), end="")
    else:
        print(report.render(), end="")
    return 0


_COMMANDS = {
    "ingest": _cmd_ingest,
    "recommend": _cmd_recommend,
    "completeness": _cmd_completeness,
    "serve": _cmd_serve,
    "analyze": _cmd_analyze,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (RecoinError, OSError) as exc:
        print(f"recoin: {exc}", file=sys.stderr)
        return DATA_EXIT


if __name__ == "__main__":
    sys.exit(main())
