"""Command-line interface.

Subcommands: normalize, build-dict, match, evaluate, review serve.
Exit codes: 0 success, 1 configuration error, 2 data error.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

from .errors import ConfigError, DataError, NamelinkError
from .metrics import evaluate as evaluate_decisions
from .metrics import write_report
from .pipeline import (
    DatasetDescriptor,
    build_dictionary,
    ingest,
    load_config,
    parse_pairs_file,
    prepare_records,
    read_expert_edits,
    read_expert_labels,
    read_results,
    run_pipeline,
)
from .parse import Convention

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DATA = 2


def _descriptor_from_args(args, path_attr="input") -> DatasetDescriptor:
    return DatasetDescriptor(
        path=Path(getattr(args, path_attr)),
        id_column=args.id_column,
        name_column=args.name_column,
        block_columns=tuple(args.block or ()),
        script=args.script,
        name_order=Convention(args.name_order),
    )


def _cmd_normalize(args) -> int:
    descriptor = _descriptor_from_args(args)
    records = ingest(descriptor)
    prepared = prepare_records(records, descriptor)

    def write(handle) -> None:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["id", "normalized", "tokens"])
        for prep in prepared:
            writer.writerow(
                [prep.id, prep.parsed.original.text, "|".join(prep.parsed.canonical_tokens)]
            )

    if args.out == "-":
        write(sys.stdout)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as handle:
            write(handle)
    return EXIT_OK


def _cmd_build_dict(args) -> int:
    pairs = parse_pairs_file(args.pairs, args.arabic_column, args.latin_column)
    edits = read_expert_edits(args.edits) if args.edits else []
    if args.strategy == "verified" and not edits:
        logging.getLogger(__name__).warning(
            "strategy 'verified' without --edits builds a plain combined join"
        )
    dictionary = build_dictionary(pairs, args.strategy, edits)
    dictionary.save(args.out)
    print(f"{len(dictionary)} entries -> {args.out}")
    return EXIT_OK


def _cmd_match(args) -> int:
    if args.config:
        config = load_config(args.config)
    else:
        from .pipeline import PipelineConfig

        if not (args.src and args.dst and args.dict and args.out):
            raise ConfigError("match needs --config or all of --src --dst --dict --out")
        config = PipelineConfig(
            source=DatasetDescriptor(
                path=Path(args.src),
                id_column=args.src_id_column,
                name_column=args.src_name_column,
                block_columns=tuple(args.block or ()),
                script=args.src_script,
                name_order=Convention(args.src_name_order),
            ),
            destination=DatasetDescriptor(
                path=Path(args.dst),
                id_column=args.dst_id_column,
                name_column=args.dst_name_column,
                block_columns=tuple(args.block or ()),
                script=args.dst_script,
                name_order=Convention(args.dst_name_order),
            ),
            dictionary_path=Path(args.dict),
            results_path=Path(args.out),
            queue_path=Path(args.queue),
            block_on=tuple(args.block or ()),
        )
    result = run_pipeline(config)
    outcomes = [d.outcome.value for d in result.decisions]
    print(
        f"{len(result.decisions)} sources: "
        f"{outcomes.count('match')} match, "
        f"{outcomes.count('possible')} possible, "
        f"{outcomes.count('non_match')} non-match -> {result.results_path}"
    )
    return EXIT_OK


def _cmd_evaluate(args) -> int:
    decisions = read_results(args.machine)
    labels = read_expert_labels(args.expert)
    matrix, report = evaluate_decisions(decisions, labels)
    write_report(args.report, report, matrix)
    print(f"report -> {args.report}")
    return EXIT_OK


def _cmd_review_serve(args) -> int:
    from .review import serve

    serve(
        queue_path=args.queue,
        journal_path=args.journal,
        port=args.port,
        static_dir=args.static,
        host=args.host,
    )
    return EXIT_OK


def _add_dataset_args(parser, prefix: str, defaults: dict) -> None:
    parser.add_argument(f"--{prefix}-id-column", default=defaults.get("id", "id"))
    parser.add_argument(f"--{prefix}-name-column", default=defaults.get("name", "name"))
    parser.add_argument(
        f"--{prefix}-script", default="auto", choices=["arabic", "latin", "auto"]
    )
    parser.add_argument(
        f"--{prefix}-name-order",
        default="first_name_first",
        choices=[c.value for c in Convention],
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="namelink")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("normalize", help="normalize and tokenize a dataset")
    p.add_argument("--input", required=True)
    p.add_argument("--id-column", default="id")
    p.add_argument("--name-column", default="name")
    p.add_argument("--script", default="auto", choices=["arabic", "latin", "auto"])
    p.add_argument(
        "--name-order", default="first_name_first", choices=[c.value for c in Convention]
    )
    p.add_argument("--block", action="append", metavar="FIELD")
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_normalize)

    p = sub.add_parser("build-dict", help="build the Arabic/Latin token dictionary")
    p.add_argument("--pairs", required=True, help="CSV/TSV of aligned full-name pairs")
    p.add_argument("--arabic-column", default="arabic")
    p.add_argument("--latin-column", default="latin")
    p.add_argument(
        "--strategy", required=True, choices=["source", "soundex", "combined", "verified"]
    )
    p.add_argument("--edits", help="expert edits TSV (action, arabic, latin)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_build_dict)

    p = sub.add_parser("match", help="run the matching pipeline")
    p.add_argument("--config", help="pipeline config file (overrides other flags)")
    p.add_argument("--src")
    p.add_argument("--dst")
    p.add_argument("--dict")
    p.add_argument("--block", action="append", metavar="FIELD")
    p.add_argument("--out")
    p.add_argument("--queue", default="queue.json")
    _add_dataset_args(p, "src", {"id": "id", "name": "name"})
    _add_dataset_args(p, "dst", {"id": "id", "name": "name"})
    p.set_defaults(func=_cmd_match)

    p = sub.add_parser("evaluate", help="score machine results against expert labels")
    p.add_argument("--machine", required=True, help="results file from `match`")
    p.add_argument("--expert", required=True, help="labels CSV: source_id,dest_ids")
    p.add_argument("--report", required=True)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("review", help="clerical review service")
    review_sub = p.add_subparsers(dest="review_command", required=True)
    ps = review_sub.add_parser("serve", help="serve the review API and UI")
    ps.add_argument("--queue", required=True)
    ps.add_argument("--journal", required=True)
    ps.add_argument("--port", type=int, default=8765)
    ps.add_argument("--host", default="127.0.0.1")
    ps.add_argument("--static", help="directory of built UI files to serve")
    ps.set_defaults(func=_cmd_review_serve)

    return parser


def main(argv: "list[str] | None" = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NamelinkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
