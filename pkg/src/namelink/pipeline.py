"""End-to-end pipeline: ingest tabular data, clean and parse names, build
or load the dictionary, match, and write the results, review queue and
(optionally) the metrics report.

Configuration is an INI-style key=value file; see README for the full key
reference. All outputs are deterministic for identical inputs and config.
"""

from __future__ import annotations

import configparser
import csv
import io
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .dictionary import (
    Dictionary,
    ExpertEdit,
    build_combined_soundex_join,
    build_soundex_join,
    build_source_extracted,
)
from .engine import (
    DatasetRecord,
    MatchDecision,
    Outcome,
    PreparedRecord,
    Thresholds,
    match_datasets,
)
from .errors import (
    ConfigError,
    DictionaryMissing,
    EncodingError,
    MissingColumn,
    NamelinkError,
)
from .metrics import ExtendedConfusionMatrix, MetricsReport, evaluate, write_report
from .normalize import ArabicFoldOptions, RawName, Script, normalize
from .parse import Convention, ParsedName, PrefixTable, parse_name

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DatasetDescriptor:
    path: Path
    id_column: str
    name_column: str
    block_columns: tuple[str, ...] = ()
    script: str = "auto"  # arabic | latin | auto
    name_order: Convention = Convention.FIRST_NAME_FIRST
    delimiter: "str | None" = None  # default: by file extension


@dataclass(frozen=True)
class PipelineConfig:
    source: DatasetDescriptor
    destination: DatasetDescriptor
    dictionary_path: Path
    results_path: Path
    queue_path: Path
    block_on: tuple[str, ...] = ()
    thresholds: Thresholds = Thresholds()
    relax_order: str = "middle_first"
    merge_bare_articles: bool = True
    fold_options: ArabicFoldOptions = ArabicFoldOptions()
    report_path: "Path | None" = None
    expert_labels_path: "Path | None" = None
    review_port: int = 8765


def _descriptor(section: configparser.SectionProxy, base: Path) -> DatasetDescriptor:
    try:
        path = base / section["path"]
        id_column = section["id_column"]
        name_column = section["name_column"]
    except KeyError as exc:
        raise ConfigError(f"[{section.name}] missing key {exc}") from exc
    order = section.get("name_order", "first_name_first")
    try:
        convention = Convention(order)
    except ValueError as exc:
        raise ConfigError(f"[{section.name}] bad name_order {order!r}") from exc
    script = section.get("script", "auto")
    if script not in ("arabic", "latin", "auto"):
        raise ConfigError(f"[{section.name}] bad script {script!r}")
    blocks = tuple(
        c.strip() for c in section.get("block_columns", "").split(",") if c.strip()
    )
    return DatasetDescriptor(
        path=path,
        id_column=id_column,
        name_column=name_column,
        block_columns=blocks,
        script=script,
        name_order=convention,
        delimiter=section.get("delimiter") or None,
    )


def load_config(path: "Path | str") -> PipelineConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser()
    try:
        parser.read(path, encoding="utf-8")
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    base = path.parent
    for required in ("source", "destination", "dictionary", "output"):
        if required not in parser:
            raise ConfigError(f"missing [{required}] section")

    matching = parser["matching"] if "matching" in parser else {}
    try:
        thresholds = Thresholds(
            match_threshold=float(matching.get("match_threshold", 0.85)),
            floor_threshold=float(matching.get("floor_threshold", 0.4)),
            max_edit_distance=int(matching.get("max_edit_distance", 2)),
        )
    except ValueError as exc:
        raise ConfigError(f"bad threshold value: {exc}") from exc
    if not 0.0 <= thresholds.match_threshold <= 1.0:
        raise ConfigError("match_threshold must be in [0, 1]")
    if not 0.0 <= thresholds.floor_threshold <= 1.0:
        raise ConfigError("floor_threshold must be in [0, 1]")
    if thresholds.max_edit_distance < 0:
        raise ConfigError("max_edit_distance must be >= 0")
    relax_order = matching.get("relax_order", "middle_first") if matching else "middle_first"
    if relax_order not in ("middle_first", "last_name_first"):
        raise ConfigError(f"bad relax_order {relax_order!r}")

    normalize_sec = parser["normalize"] if "normalize" in parser else {}
    fold = ArabicFoldOptions(
        waw_hamza_to=normalize_sec.get("waw_hamza_to", "alef"),
        final_hamza=normalize_sec.get("final_hamza", "drop"),
    )
    if fold.waw_hamza_to not in ("alef", "waw") or fold.final_hamza not in ("drop", "yeh"):
        raise ConfigError("bad [normalize] option")

    output = parser["output"]
    if "results" not in output or "queue" not in output:
        raise ConfigError("[output] must set results and queue")

    block_on = ()
    if "matching" in parser:
        block_on = tuple(
            c.strip() for c in parser["matching"].get("block_on", "").split(",") if c.strip()
        )

    review = parser["review"] if "review" in parser else {}

    return PipelineConfig(
        source=_descriptor(parser["source"], base),
        destination=_descriptor(parser["destination"], base),
        dictionary_path=base / parser["dictionary"]["path"],
        results_path=base / output["results"],
        queue_path=base / output["queue"],
        block_on=block_on,
        thresholds=thresholds,
        relax_order=relax_order,
        merge_bare_articles=(
            matching.get("merge_bare_articles", "true") == "true" if matching else True
        ),
        fold_options=fold,
        report_path=(base / output["report"]) if output.get("report") else None,
        expert_labels_path=(
            base / output["expert_labels"] if output.get("expert_labels") else None
        ),
        review_port=int(review.get("port", 8765)) if review else 8765,
    )


# ---------------------------------------------------------------------------
# Ingest


def ingest(descriptor: DatasetDescriptor) -> list[DatasetRecord]:
    """Read a CSV/TSV into dataset records; malformed rows are skipped with
    line-numbered warnings."""
    path = Path(descriptor.path)
    if not path.exists():
        raise ConfigError(f"dataset file not found: {path}")
    delimiter = descriptor.delimiter or ("\t" if path.suffix.lower() == ".tsv" else ",")
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise EncodingError(f"{path} is not valid UTF-8: {exc}") from exc

    reader = csv.DictReader(io.StringIO(text), delimiter=delimiter)
    header = reader.fieldnames or []
    for column in (descriptor.id_column, descriptor.name_column, *descriptor.block_columns):
        if column not in header:
            raise MissingColumn(f"{path} has no column {column!r} (header: {header})")

    records = []
    seen_ids: set[str] = set()
    for lineno, row in enumerate(reader, 2):
        rec_id = (row.get(descriptor.id_column) or "").strip()
        name = (row.get(descriptor.name_column) or "").strip()
        if not rec_id or not name:
            logger.warning("%s:%d: missing id or name; row skipped", path, lineno)
            continue
        if rec_id in seen_ids:
            logger.warning("%s:%d: duplicate id %r; row skipped", path, lineno, rec_id)
            continue
        seen_ids.add(rec_id)
        records.append(
            DatasetRecord(
                id=rec_id,
                full_name=RawName.of(name),
                block_fields={c: (row.get(c) or "").strip() for c in descriptor.block_columns},
                extra={
                    k: v
                    for k, v in row.items()
                    if k not in (descriptor.id_column, descriptor.name_column)
                    and k not in descriptor.block_columns
                    and v is not None
                },
            )
        )
    return records


def prepare_records(
    records: Iterable[DatasetRecord],
    descriptor: DatasetDescriptor,
    fold_options: ArabicFoldOptions = ArabicFoldOptions(),
    table: "PrefixTable | None" = None,
    merge_bare_articles: bool = True,
) -> list[PreparedRecord]:
    """Normalize and parse every record's name; records whose names cannot
    be normalized under the declared script are skipped with a warning."""
    prepared = []
    for record in records:
        raw = record.full_name
        try:
            if descriptor.script == "arabic" or (
                descriptor.script == "auto" and raw.script is Script.ARABIC
            ):
                normalized = normalize(
                    RawName(raw.text, Script.ARABIC, raw.comma_hint), fold_options
                )
            else:
                normalized = normalize(RawName(raw.text, Script.LATIN, raw.comma_hint))
            parsed = parse_name(
                normalized,
                convention=descriptor.name_order,
                table=table,
                merge_bare_articles=merge_bare_articles,
            )
        except NamelinkError as exc:
            logger.warning("record %s: %s; skipped", record.id, exc)
            continue
        prepared.append(PreparedRecord(record=record, parsed=parsed))
    return prepared


def parse_pairs_file(
    path: "Path | str",
    arabic_column: str = "arabic",
    latin_column: str = "latin",
    fold_options: ArabicFoldOptions = ArabicFoldOptions(),
) -> list[tuple[ParsedName, ParsedName]]:
    """Read aligned (arabic, latin) full-name pairs for dictionary building."""
    path = Path(path)
    delimiter = "\t" if path.suffix.lower() == ".tsv" else ","
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise EncodingError(f"{path} is not valid UTF-8: {exc}") from exc
    reader = csv.DictReader(io.StringIO(text), delimiter=delimiter)
    header = reader.fieldnames or []
    for column in (arabic_column, latin_column):
        if column not in header:
            raise MissingColumn(f"{path} has no column {column!r}")
    pairs = []
    for lineno, row in enumerate(reader, 2):
        arabic = (row.get(arabic_column) or "").strip()
        latin = (row.get(latin_column) or "").strip()
        if not arabic or not latin:
            logger.warning("%s:%d: incomplete pair skipped", path, lineno)
            continue
        try:
            parsed_ar = parse_name(normalize(RawName(arabic, Script.ARABIC), fold_options))
            parsed_la = parse_name(normalize(RawName(latin, Script.LATIN, False)))
        except NamelinkError as exc:
            logger.warning("%s:%d: %s; pair skipped", path, lineno, exc)
            continue
        pairs.append((parsed_ar, parsed_la))
    return pairs


def build_dictionary(
    pairs: Sequence[tuple[ParsedName, ParsedName]],
    strategy: str,
    edits: Sequence[ExpertEdit] = (),
) -> Dictionary:
    if strategy == "source":
        built = build_source_extracted(pairs)
    elif strategy == "soundex":
        built = build_soundex_join(pairs)
    elif strategy in ("combined", "verified"):
        built = build_combined_soundex_join(pairs)
    else:
        raise ConfigError(f"unknown dictionary strategy {strategy!r}")
    if strategy == "verified" or edits:
        built = built.with_edits(edits)
    return built


def read_expert_edits(path: "Path | str") -> list[ExpertEdit]:
    """Edits file: `action<TAB>arabic<TAB>latin` per line."""
    edits = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3 or parts[0] not in ("add", "remove", "verify"):
            raise ConfigError(f"{path}:{lineno}: bad edit line")
        edits.append(ExpertEdit(action=parts[0], arabic=parts[1], latin=parts[2]))
    return edits


def read_expert_labels(path: "Path | str") -> dict[str, list[str]]:
    """Expert labels CSV: `source_id,dest_ids` with semicolon-separated ids."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise EncodingError(f"{path} is not valid UTF-8: {exc}") from exc
    reader = csv.DictReader(io.StringIO(text))
    header = reader.fieldnames or []
    if "source_id" not in header or "dest_ids" not in header:
        raise MissingColumn(f"{path} must have source_id,dest_ids columns")
    labels: dict[str, list[str]] = {}
    for row in reader:
        sid = (row.get("source_id") or "").strip()
        if not sid:
            continue
        dests = [d.strip() for d in (row.get("dest_ids") or "").split(";") if d.strip()]
        labels[sid] = dests
    return labels


# ---------------------------------------------------------------------------
# Output writers


def decision_to_dict(decision: MatchDecision) -> dict:
    return {
        "source_id": decision.source_id,
        "outcome": decision.outcome.value,
        "candidates": [
            {
                "dest_id": c.dest_id,
                "wat": c.wat,
                "at": c.at,
                "edit_distance": c.edit_distance,
                "relax_level": c.relax_level,
            }
            for c in decision.candidates
        ],
    }


def write_results(path: "Path | str", decisions: Sequence[MatchDecision]) -> None:
    """One JSON object per source record, one per line, sorted by source id."""
    lines = [
        json.dumps(decision_to_dict(d), sort_keys=True, ensure_ascii=False)
        for d in sorted(decisions, key=lambda d: d.source_id)
    ]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def read_results(path: "Path | str") -> list[MatchDecision]:
    from .engine import CandidatePair  # local to avoid a cycle at import time

    decisions = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line:
            continue
        raw = json.loads(line)
        candidates = tuple(
            CandidatePair(
                source_id=raw["source_id"],
                dest_id=c["dest_id"],
                wat=c["wat"],
                at=c["at"],
                edit_distance=c["edit_distance"],
                relax_level=c["relax_level"],
                verified=True,
            )
            for c in raw["candidates"]
        )
        decisions.append(
            MatchDecision(
                source_id=raw["source_id"],
                outcome=Outcome(raw["outcome"]),
                candidates=candidates,
            )
        )
    return decisions


def queue_items(
    decisions: Sequence[MatchDecision],
    sources: Mapping[str, PreparedRecord],
    dests: Mapping[str, PreparedRecord],
) -> list[dict]:
    """Review-queue entries for every possible-match decision, carrying the
    token views and alignments the reviewer sees."""
    items = []
    for decision in sorted(decisions, key=lambda d: d.source_id):
        if decision.outcome is not Outcome.POSSIBLE:
            continue
        source = sources[decision.source_id]
        items.append(
            {
                "id": decision.source_id,
                "source_id": decision.source_id,
                "source_raw": source.record.full_name.text,
                "source_tokens": list(source.parsed.canonical_tokens),
                "candidates": [
                    {
                        "dest_id": c.dest_id,
                        "dest_raw": dests[c.dest_id].record.full_name.text,
                        "dest_tokens": list(dests[c.dest_id].parsed.canonical_tokens),
                        "wat": c.wat,
                        "at": c.at,
                        "edit_distance": c.edit_distance,
                        "relax_level": c.relax_level,
                        "alignment": [
                            {"source_token": s, "dest_token": d, "sim": w}
                            for s, d, w in c.alignment
                        ],
                    }
                    for c in decision.candidates
                ],
                "status": "pending",
                "decided_by": None,
                "decided_at": None,
                "accepted": [],
            }
        )
    return items


def write_queue(path: "Path | str", items: Sequence[dict]) -> None:
    Path(path).write_text(
        json.dumps(list(items), sort_keys=True, ensure_ascii=False, indent=2) + "\n",
        encoding="utf-8",
    )


# ---------------------------------------------------------------------------
# Orchestration


@dataclass
class PipelineResult:
    decisions: list[MatchDecision]
    results_path: Path
    queue_path: Path
    report_path: "Path | None" = None
    matrix: "ExtendedConfusionMatrix | None" = None
    report: "MetricsReport | None" = None


def run_pipeline(config: PipelineConfig) -> PipelineResult:
    """Ingest, prepare, match, and write every configured output."""
    if not Path(config.dictionary_path).exists():
        raise DictionaryMissing(f"dictionary not found: {config.dictionary_path}")
    dictionary = Dictionary.load(config.dictionary_path)

    src_records = ingest(config.source)
    dst_records = ingest(config.destination)
    if not src_records:
        logger.warning("source dataset is empty; nothing to match")
    sources = prepare_records(
        src_records, config.source, config.fold_options, None, config.merge_bare_articles
    )
    dests = prepare_records(
        dst_records, config.destination, config.fold_options, None, config.merge_bare_articles
    )

    decisions = match_datasets(
        sources,
        dests,
        dictionary,
        thresholds=config.thresholds,
        conditions=config.block_on,
        relax_order=config.relax_order,
    )

    write_results(config.results_path, decisions)
    items = queue_items(
        decisions,
        {p.id: p for p in sources},
        {p.id: p for p in dests},
    )
    write_queue(config.queue_path, items)

    result = PipelineResult(
        decisions=decisions,
        results_path=config.results_path,
        queue_path=config.queue_path,
    )
    if config.expert_labels_path and config.report_path:
        labels = read_expert_labels(config.expert_labels_path)
        unlabeled = [d.source_id for d in decisions if d.source_id not in labels]
        if not decisions or unlabeled:
            logger.warning(
                "expert labels incomplete (%d unlabeled sources); report skipped",
                len(unlabeled),
            )
        else:
            matrix, report = evaluate(
                decisions, {d.source_id: labels[d.source_id] for d in decisions}
            )
            write_report(config.report_path, report, matrix)
            result.report_path = config.report_path
            result.matrix = matrix
            result.report = report
    return result
