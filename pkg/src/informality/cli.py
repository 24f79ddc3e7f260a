"""Command-line front end: ingest -> classify -> tabulate/decompose -> emit.

Commands
    ingest            parse an extract, emit normalized records + report
    classify          append an employment_class column, emit tally
    tabulate          informality share table (optionally a cross-tab)
    decompose         single-level inequality decomposition
    nested-decompose  outer/inner two-level decomposition
    validate-table    replay a published decomposition table

Exit codes: 0 ok; 2 configuration error; 3 input parse failure;
4 degenerate statistics; 5 published-table tolerances exceeded.

Environment overrides for default paths: INFORMALITY_LAYOUT,
INFORMALITY_RECODES (path list, ':'-separated), INFORMALITY_FIXTURE,
INFORMALITY_OUTPUT_DIR.

Every run writes a ``*_manifest.json`` next to its outputs recording the
inputs (with digests), record counts, exclusion shares and the package
version; the manifest is the only output carrying a timestamp, so primary
outputs are byte-identical across re-runs on unchanged inputs.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import time
from pathlib import Path

from . import __version__
from .decompose import (
    labeled_sample_from_records,
    decompose as decompose_sample,
    nested_decompose,
    validate_published_table,
)
from .ingest import (
    LayoutError,
    RecodeError,
    StreamError,
    RecordError,
    ingest_summary,
    load_layout,
    load_recode_file,
    read_records,
)
from .records import AGE_BUCKET_EDGES, AGE_GROUPS, RECORD_COLUMNS, record_to_row
from .stats import EmptySampleError
from .taxonomy import ClassificationPolicy, EmploymentClass, classify_dataset, load_policy_file

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PARSE = 3
EXIT_DEGENERATE = 4
EXIT_VALIDATION = 5

# Acceptance tolerances for validate-table.
CW_TOLERANCE = 0.001
CT_TOLERANCE = 0.15


class ConfigError(Exception):
    pass


class ParseFailure(Exception):
    pass


class DegenerateStatistics(Exception):
    pass


def _env_default(name: str, fallback=None):
    return os.environ.get(name, fallback)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="informality",
        description="Informal-labour classification and inequality decomposition toolkit",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p: argparse.ArgumentParser, needs_input: bool = True) -> None:
        if needs_input:
            p.add_argument("--input", required=True, help="extract file (fixed-width text or CSV)")
            p.add_argument(
                "--layout",
                default=_env_default("INFORMALITY_LAYOUT"),
                help="layout descriptor path (env INFORMALITY_LAYOUT)",
            )
            p.add_argument(
                "--recodes",
                nargs="*",
                default=None,
                help="recode map CSVs or directories; default: bundled maps (env INFORMALITY_RECODES)",
            )
        p.add_argument(
            "--output-dir",
            default=_env_default("INFORMALITY_OUTPUT_DIR", "."),
            help="directory for outputs and the run manifest",
        )
        p.add_argument("--format", choices=("csv", "json"), default="csv", help="primary output format")
        p.add_argument("--seed", type=int, default=None, help="seed recorded in the manifest")

    def add_policy(p: argparse.ArgumentParser) -> None:
        p.add_argument(
            "--indeterminate",
            choices=("exclude", "informal"),
            default="exclude",
            help="handling of Indeterminate workers downstream",
        )
        p.add_argument("--policy", default=None, help="decision-table override CSV")
        p.add_argument(
            "--min-age",
            type=int,
            default=None,
            help="drop age groups whose lower bucket edge is below this age",
        )
        p.add_argument(
            "--trim-top",
            type=float,
            default=0.0,
            help="drop records above the weighted (100-X)%% MPCE quantile; default off",
        )

    p = sub.add_parser("ingest", help="parse an extract into normalized records")
    add_io(p)

    p = sub.add_parser("classify", help="append employment_class to each record")
    add_io(p)
    add_policy(p)

    p = sub.add_parser("tabulate", help="informality shares within/across a category")
    add_io(p)
    add_policy(p)
    p.add_argument("--category", required=True, help="primary category (e.g. occupation)")
    p.add_argument("--secondary", default=None, help="secondary category for a cross-tab")

    p = sub.add_parser("decompose", help="single-level GE decomposition")
    add_io(p)
    add_policy(p)
    p.add_argument("--category", default="employment_class", help="grouping key")
    p.add_argument("--alpha", type=float, default=1.3)
    p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("nested-decompose", help="two-level GE decomposition")
    add_io(p)
    add_policy(p)
    p.add_argument("--outer-key", default="employment_class")
    p.add_argument("--inner-key", default="occupation")
    p.add_argument("--alpha", type=float, default=1.3)
    p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("validate-table", help="replay a published decomposition table")
    add_io(p, needs_input=False)
    p.add_argument(
        "--fixture",
        default=_env_default("INFORMALITY_FIXTURE"),
        help="published-table fixture CSV; default: bundled NSSO-68 table",
    )
    p.add_argument("--alpha", type=float, default=1.3)
    return parser


# ---------------------------------------------------------------------------
# shared pipeline pieces

def _load_recodes(args) -> dict:
    from . import default_recodes

    paths = args.recodes
    if paths is None:
        env = _env_default("INFORMALITY_RECODES")
        paths = env.split(":") if env else None
    if not paths:
        return default_recodes()
    maps = {}
    for p in paths:
        path = Path(p)
        if not path.exists():
            raise ConfigError(f"recode path {p!r} does not exist")
        files = sorted(path.glob("*.csv")) if path.is_dir() else [path]
        for f in files:
            m = load_recode_file(f)
            maps[m.name] = m
    return maps


def _load_layout(args):
    if not args.layout:
        raise ConfigError("--layout is required (or set INFORMALITY_LAYOUT)")
    try:
        return load_layout(args.layout)
    except FileNotFoundError:
        raise ConfigError(f"layout file {args.layout!r} not found") from None
    except LayoutError as exc:
        raise ConfigError(f"invalid layout: {exc}") from None


def _parse_input(args, layout, recodes) -> tuple[list, list[RecordError]]:
    try:
        with open(args.input, "rb") as fh:
            results = list(read_records(fh, layout, recodes))
    except FileNotFoundError:
        raise ConfigError(f"input file {args.input!r} not found") from None
    except (StreamError, OSError) as exc:
        raise ParseFailure(str(exc)) from None
    records = [r for r in results if not isinstance(r, RecordError)]
    errors = [r for r in results if isinstance(r, RecordError)]
    if not records:
        raise ParseFailure(f"no records admitted from {args.input!r} ({len(errors)} rejected)")
    return records, errors


def _policy(args) -> ClassificationPolicy | None:
    overrides = {}
    if getattr(args, "policy", None):
        try:
            overrides = load_policy_file(args.policy).overrides
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot load policy file: {exc}") from None
    cls = (
        EmploymentClass.INFORMAL
        if getattr(args, "indeterminate", "exclude") == "informal"
        else EmploymentClass.INDETERMINATE
    )
    if not overrides and cls is EmploymentClass.INDETERMINATE:
        return None
    return ClassificationPolicy(overrides=overrides, indeterminate_class=cls)


def _age_filter(args, records: list) -> list:
    min_age = getattr(args, "min_age", None)
    if min_age is None:
        return records
    allowed = {
        group for group, edge in zip(AGE_GROUPS, AGE_BUCKET_EDGES) if edge >= min_age
    }
    return [r for r in records if r.age_group in allowed]


def _trim_filter(args, records: list) -> list:
    """Drop records above the weighted MPCE quantile implied by --trim-top."""
    pct = getattr(args, "trim_top", 0.0) or 0.0
    if pct <= 0.0:
        return records
    if pct >= 100.0:
        raise ConfigError("--trim-top must be below 100")
    ranked = sorted(
        (r for r in records if r.mpce is not None), key=lambda r: (r.mpce, r.record_id)
    )
    total = sum(r.weight for r in ranked)
    if total <= 0.0:
        return records
    threshold = total * (1.0 - pct / 100.0)
    cum = 0.0
    cutoff = ranked[-1].mpce
    for r in ranked:
        cum += r.weight
        if cum >= threshold:
            cutoff = r.mpce
            break
    return [r for r in records if r.mpce is None or r.mpce <= cutoff]


def _sha256(path: str) -> dict:
    digest = hashlib.sha256()
    size = 0
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
            size += len(chunk)
    return {"sha256": digest.hexdigest(), "bytes": size}


def _write_outputs(args, stem: str, outputs: dict[str, str], manifest_extra: dict) -> None:
    out_dir = Path(args.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, text in outputs.items():
        (out_dir / name).write_text(text, encoding="utf-8")
    manifest = {
        "command": args.command,
        "version": __version__,
        "created_utc": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "argv": sys.argv[1:],
        "seed": getattr(args, "seed", None),
        "outputs": sorted(outputs),
        "inputs": {},
    }
    for key in ("input", "layout", "policy", "fixture"):
        value = getattr(args, key, None)
        if value:
            manifest["inputs"][str(value)] = _sha256(value)
    manifest.update(manifest_extra)
    (out_dir / f"{stem}_manifest.json").write_text(
        json.dumps(manifest, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )


def _records_csv(rows: list[list[str]], header: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _records_jsonl(rows: list[list[str]], header: list[str]) -> str:
    out = []
    for row in rows:
        out.append(json.dumps(dict(zip(header, row)), sort_keys=True))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# command implementations

def _cmd_ingest(args) -> int:
    layout = _load_layout(args)
    recodes = _load_recodes(args)
    try:
        with open(args.input, "rb") as fh:
            results = list(read_records(fh, layout, recodes))
    except FileNotFoundError:
        raise ConfigError(f"input file {args.input!r} not found") from None
    except (StreamError, OSError) as exc:
        raise ParseFailure(str(exc)) from None
    report = ingest_summary(results)
    records = [r for r in results if not isinstance(r, RecordError)]
    rows = [record_to_row(r) for r in records]
    header = list(RECORD_COLUMNS)
    if args.format == "json":
        outputs = {"ingest_records.jsonl": _records_jsonl(rows, header)}
    else:
        outputs = {"ingest_records.csv": _records_csv(rows, header)}
    outputs["ingest_report.json"] = report.to_json()
    _write_outputs(args, "ingest", outputs, {"counts": report.to_dict()})
    print(f"ingest: {report.accepted} accepted, {report.rejected} rejected")
    if report.accepted == 0:
        raise ParseFailure("no records admitted")
    return EXIT_OK


def _classified_records(args):
    layout = _load_layout(args)
    recodes = _load_recodes(args)
    records, errors = _parse_input(args, layout, recodes)
    records = _trim_filter(args, _age_filter(args, records))
    if not records:
        raise ParseFailure("age/trim filters removed every record")
    stream = classify_dataset(records, _policy(args))
    pairs = list(stream)
    return pairs, stream.tally, errors


def _cmd_classify(args) -> int:
    pairs, tally, _ = _classified_records(args)
    header = list(RECORD_COLUMNS) + ["employment_class"]
    rows = [record_to_row(r) + [cls.value] for r, cls in pairs]
    if args.format == "json":
        outputs = {"classify_records.jsonl": _records_jsonl(rows, header)}
    else:
        outputs = {"classify_records.csv": _records_csv(rows, header)}
    outputs["classify_tally.json"] = json.dumps(tally.to_dict(), sort_keys=True, indent=2) + "\n"
    _write_outputs(args, "classify", outputs, {"tally": tally.to_dict()})
    share = tally.weighted_share(EmploymentClass.INFORMAL)
    print(f"classify: {len(rows)} records, weighted informal share {share:.4f}")
    return EXIT_OK


def _cmd_tabulate(args) -> int:
    from .tabulate import ZeroWeightCategoryError, cross_tab, share_table

    pairs, tally, _ = _classified_records(args)
    try:
        table = share_table(pairs, args.category)
    except ZeroWeightCategoryError as exc:
        raise DegenerateStatistics(str(exc)) from None
    outputs = {}
    stem = f"tabulate_{args.category}"
    if args.format == "json":
        outputs[f"{stem}.json"] = table.to_json()
    else:
        outputs[f"{stem}.csv"] = table.to_csv()
    if args.secondary:
        xt = cross_tab(pairs, args.secondary, primary=args.category)
        xname = f"crosstab_{args.category}_{args.secondary}"
        if args.format == "json":
            outputs[f"{xname}.json"] = xt.to_json()
        else:
            outputs[f"{xname}.csv"] = xt.to_csv()
    _write_outputs(
        args,
        stem,
        outputs,
        {"excluded_weight_share": table.excluded_weight_share, "tally": tally.to_dict()},
    )
    print(f"tabulate: {len(table.rows)} rows for {args.category}")
    return EXIT_OK


def _cmd_decompose(args) -> int:
    pairs, tally, _ = _classified_records(args)
    try:
        sample, excluded = labeled_sample_from_records(pairs, args.category)
    except EmptySampleError as exc:
        raise DegenerateStatistics(str(exc)) from None
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    try:
        result = decompose_sample(sample, args.alpha, threads=args.threads)
    except EmptySampleError as exc:
        raise DegenerateStatistics(str(exc)) from None
    stem = f"decompose_{args.category}"
    outputs = {f"{stem}.json": result.to_json()}
    if args.format == "csv":
        outputs[f"{stem}.csv"] = result.to_csv()
    _write_outputs(
        args,
        stem,
        outputs,
        {"excluded_weight_share": excluded, "alpha": args.alpha, "tally": tally.to_dict()},
    )
    print(
        f"decompose[{args.category}] alpha={args.alpha}: I={result.total_index.value:.6f} "
        f"within={result.share_within_pct:.2f}% between={result.share_between_pct:.2f}%"
    )
    if result.degenerate:
        raise DegenerateStatistics("total index is zero with nonzero groups")
    return EXIT_OK


def _cmd_nested(args) -> int:
    pairs, tally, _ = _classified_records(args)
    admissible = [
        (r, cls)
        for r, cls in pairs
        if r.mpce is not None and r.mpce > 0.0 and cls is not EmploymentClass.INDETERMINATE
    ]
    if not admissible:
        raise DegenerateStatistics("no admissible records")
    from .records import category_value

    def key_of(record, cls, key):
        return cls.value if key == "employment_class" else category_value(record, key)

    values = [r.mpce for r, _ in admissible]
    weights = [r.weight for r, _ in admissible]
    try:
        outer = [key_of(r, cls, args.outer_key) for r, cls in admissible]
        inner = [key_of(r, cls, args.inner_key) for r, cls in admissible]
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    try:
        result = nested_decompose(
            values,
            weights,
            outer,
            inner,
            args.alpha,
            outer_key=args.outer_key,
            inner_key=args.inner_key,
            threads=args.threads,
        )
    except EmptySampleError as exc:
        raise DegenerateStatistics(str(exc)) from None
    stem = f"nested_{args.outer_key}_{args.inner_key}"
    outputs = {f"{stem}.json": result.to_json()}
    if args.format == "csv":
        outputs[f"{stem}.csv"] = result.to_csv()
    _write_outputs(args, stem, outputs, {"alpha": args.alpha, "tally": tally.to_dict()})
    print(
        f"nested[{args.outer_key}->{args.inner_key}] alpha={args.alpha}: "
        f"I={result.outer.total_index.value:.6f} closure={result.grand_closure_pct():.4f}%"
    )
    if result.outer.degenerate:
        raise DegenerateStatistics("total index is zero with nonzero groups")
    return EXIT_OK


def _cmd_validate_table(args) -> int:
    from . import published_fixture_path

    fixture = args.fixture or str(published_fixture_path())
    args.fixture = fixture
    try:
        report = validate_published_table(fixture, alpha=args.alpha)
    except FileNotFoundError:
        raise ConfigError(f"fixture {fixture!r} not found") from None
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    outputs = {"validate_table_report.json": report.to_json()}
    _write_outputs(args, "validate_table", outputs, {"alpha": args.alpha})
    print(
        f"validate-table: max C_w deviation {report.max_cw_deviation:.6f}, "
        f"max C_t deviation {report.max_ct_deviation:.4f}, "
        f"{len(report.discrepancies)} documented discrepancies"
    )
    for note in report.discrepancies:
        print(f"  note: {note}")
    if report.max_cw_deviation > CW_TOLERANCE or report.max_ct_deviation > CT_TOLERANCE:
        print("validate-table: deviations exceed tolerances", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


_COMMANDS = {
    "ingest": _cmd_ingest,
    "classify": _cmd_classify,
    "tabulate": _cmd_tabulate,
    "decompose": _cmd_decompose,
    "nested-decompose": _cmd_nested,
    "validate-table": _cmd_validate_table,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (RecodeError, LayoutError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ParseFailure as exc:
        print(f"parse failure: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DegenerateStatistics as exc:
        print(f"degenerate statistics: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
