"""Layout-driven parsing of survey extracts into observation records.

A layout descriptor declares, per field, where the bytes live (fixed-width
start/width or a CSV column), how to interpret them (decimal with an
implied-decimal scale, integer, or code), which recode map translates the
code, and which semantic role the field fills. The same binary then serves
survey rounds whose file layouts differ: only the descriptor changes.

Descriptor grammar (line oriented, ``#`` comments):

    layout nsso68-worker      # optional name
    format fixed              # fixed | csv
    record-length 64          # fixed only

    field weight              # opens a field block
      start 1                 # 1-based column (fixed)
      width 10
      kind decimal            # decimal | integer | code
      scale 100               # implied-decimal divisor, power of ten
      role weight

    field occupation
      column occ_code         # CSV binding instead of start/width
      kind code
      recode occupation       # recode map name
      role occupation

    absent region             # a role explicitly not present in the file

Per-record parse failures are emitted in-stream as RecordError items and
never abort the file; only stream-level I/O failures raise. Parsing is
line-independent and every type here is immutable after construction, so
lines may be processed in parallel as long as output order is restored;
this implementation parses sequentially and preserves order by design.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import IO, Iterable, Iterator, Mapping

from .records import (
    AGE_BUCKET_EDGES,
    AGE_GROUPS,
    EnterpriseProfile,
    GENDERS,
    JobProfile,
    JobStatus,
    ObservationRecord,
    Ownership,
    SECTORS,
    SOCIAL_GROUPS,
    SizeClass,
    SocialSecurity,
    age_group_of,
)
from .summation import NeumaierAccumulator

REQUIRED_ROLES = (
    "weight",
    "mpce",
    "occupation",
    "industry",
    "sector",
    "gender",
    "social_group",
    "age",
    "enterprise_type",
    "enterprise_size",
    "job_status",
    "social_security",
)
OPTIONAL_ROLES = ("region", "record_id")
KINDS = ("decimal", "integer", "code")

_ENUM_ROLES = {
    "sector": SECTORS,
    "gender": GENDERS,
    "social_group": SOCIAL_GROUPS,
    "enterprise_type": tuple(m.value for m in Ownership),
    "enterprise_size": tuple(m.value for m in SizeClass),
    "job_status": tuple(m.value for m in JobStatus),
    "social_security": tuple(m.value for m in SocialSecurity),
}


class LayoutError(ValueError):
    """Invalid layout descriptor (syntax or invariant violation)."""


class RecodeError(ValueError):
    """Invalid recode map definition."""


class StreamError(IOError):
    """Stream-level ingest failure (aborts the whole file)."""


@dataclass(frozen=True)
class FieldSpec:
    name: str
    kind: str
    start: int | None = None
    width: int | None = None
    column: str | None = None
    scale: int = 1
    recode: str | None = None
    role: str | None = None

    @property
    def end(self) -> int:
        """One past the last 1-based column of a fixed-width span."""
        assert self.start is not None and self.width is not None
        return self.start + self.width


@dataclass(frozen=True)
class LayoutSpec:
    format: str
    fields: tuple[FieldSpec, ...]
    record_length: int | None = None
    name: str = ""
    absent_roles: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        _validate_layout(self)

    def field_for_role(self, role: str) -> FieldSpec | None:
        for f in self.fields:
            if f.role == role:
                return f
        return None

    def recode_names(self) -> set[str]:
        return {f.recode for f in self.fields if f.recode}


def _validate_layout(layout: LayoutSpec) -> None:
    if layout.format not in ("fixed", "csv"):
        raise LayoutError(f"format must be 'fixed' or 'csv', got {layout.format!r}")
    if not layout.fields:
        raise LayoutError("layout declares no fields")
    names: set[str] = set()
    roles: set[str] = set()
    for f in layout.fields:
        if f.name in names:
            raise LayoutError(f"duplicate field name {f.name!r}")
        names.add(f.name)
        if f.kind not in KINDS:
            raise LayoutError(f"field {f.name!r}: kind must be one of {KINDS}")
        if f.scale < 1 or (f.scale != 1 and not _is_power_of_ten(f.scale)):
            raise LayoutError(f"field {f.name!r}: scale must be a power of ten >= 1")
        if f.recode and f.kind != "code":
            raise LayoutError(f"field {f.name!r}: recode applies only to kind=code")
        if f.role is not None:
            if f.role not in REQUIRED_ROLES + OPTIONAL_ROLES:
                raise LayoutError(f"field {f.name!r}: unknown role {f.role!r}")
            if f.role in roles:
                raise LayoutError(f"role {f.role!r} bound to more than one field")
            if f.role in layout.absent_roles:
                raise LayoutError(f"role {f.role!r} both bound and declared absent")
            roles.add(f.role)
        if layout.format == "fixed":
            if f.start is None or f.width is None:
                raise LayoutError(f"field {f.name!r}: fixed layout needs start and width")
            if f.column is not None:
                raise LayoutError(f"field {f.name!r}: column binding is CSV-only")
            if f.start < 1 or f.width < 1:
                raise LayoutError(f"field {f.name!r}: start must be >= 1 and width >= 1")
        else:
            if f.column is None:
                raise LayoutError(f"field {f.name!r}: csv layout needs a column binding")
            if f.start is not None or f.width is not None:
                raise LayoutError(f"field {f.name!r}: start/width are fixed-width-only")
    for role in ("weight", "mpce"):
        f = None
        for g in layout.fields:
            if g.role == role:
                f = g
        if f is not None and f.kind == "code":
            raise LayoutError(f"role {role!r} must be bound to a numeric field")
    if layout.format == "fixed":
        if layout.record_length is None or layout.record_length < 1:
            raise LayoutError("fixed layout needs a positive record-length")
        spans = sorted(((f.start, f.end, f.name) for f in layout.fields))
        for (s1, e1, n1), (s2, e2, n2) in zip(spans, spans[1:]):
            if s2 < e1:
                raise LayoutError(f"fields {n1!r} and {n2!r} have overlapping spans")
        last = max(f.end for f in layout.fields) - 1
        if last > layout.record_length:
            raise LayoutError(
                f"field span extends to column {last}, beyond record-length {layout.record_length}"
            )
    for role in REQUIRED_ROLES:
        if role not in roles and role not in layout.absent_roles:
            raise LayoutError(f"required role {role!r} is neither bound nor marked absent")


def _is_power_of_ten(n: int) -> bool:
    while n % 10 == 0:
        n //= 10
    return n == 1


_FIELD_KEYS = ("start", "width", "column", "kind", "scale", "recode", "role")


def parse_layout(text: str) -> LayoutSpec:
    """Parse a layout descriptor; errors report the offending line."""
    fmt: str | None = None
    record_length: int | None = None
    name = ""
    absent: set[str] = set()
    fields: list[FieldSpec] = []
    current: dict | None = None

    def finish_current() -> None:
        nonlocal current
        if current is None:
            return
        line_no = current.pop("_line")
        if "kind" not in current:
            raise LayoutError(f"line {line_no}: field {current['name']!r} missing kind")
        try:
            fields.append(FieldSpec(**current))
        except TypeError as exc:
            raise LayoutError(f"line {line_no}: {exc}") from None
        current = None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        key, args = parts[0], parts[1:]
        if key == "layout":
            if len(args) != 1:
                raise LayoutError(f"line {line_no}: layout takes one name")
            name = args[0]
        elif key == "format":
            if len(args) != 1 or args[0] not in ("fixed", "csv"):
                raise LayoutError(f"line {line_no}: format must be 'fixed' or 'csv'")
            fmt = args[0]
        elif key == "record-length":
            record_length = _int_arg(args, line_no, "record-length")
        elif key == "absent":
            if len(args) != 1:
                raise LayoutError(f"line {line_no}: absent takes one role name")
            if args[0] not in REQUIRED_ROLES + OPTIONAL_ROLES:
                raise LayoutError(f"line {line_no}: unknown role {args[0]!r}")
            absent.add(args[0])
        elif key == "field":
            finish_current()
            if len(args) != 1:
                raise LayoutError(f"line {line_no}: field takes one name")
            current = {"name": args[0], "_line": line_no}
        elif key in _FIELD_KEYS:
            if current is None:
                raise LayoutError(f"line {line_no}: {key!r} outside a field block")
            if key in current:
                raise LayoutError(f"line {line_no}: duplicate {key!r} in field {current['name']!r}")
            if key in ("start", "width", "scale"):
                current[key] = _int_arg(args, line_no, key)
            else:
                if len(args) != 1:
                    raise LayoutError(f"line {line_no}: {key} takes one value")
                current[key] = args[0]
        else:
            raise LayoutError(f"line {line_no}: unknown directive {key!r}")
    finish_current()
    if fmt is None:
        raise LayoutError("descriptor does not declare a format")
    return LayoutSpec(
        format=fmt,
        fields=tuple(fields),
        record_length=record_length,
        name=name,
        absent_roles=frozenset(absent),
    )


def _int_arg(args: list[str], line_no: int, key: str) -> int:
    if len(args) != 1:
        raise LayoutError(f"line {line_no}: {key} takes one integer")
    try:
        return int(args[0])
    except ValueError:
        raise LayoutError(f"line {line_no}: {key} must be an integer, got {args[0]!r}") from None


def load_layout(path: str | Path) -> LayoutSpec:
    return parse_layout(Path(path).read_text(encoding="utf-8"))


@dataclass(frozen=True)
class RecodeMap:
    """Source-code to category-label mapping with a default policy.

    ``default`` is one of "reject" (unknown codes fail the record),
    "passthrough" (unknown codes become their own label), or "label"
    (unknown codes map to ``default_label``).
    """

    name: str
    entries: Mapping[str, str]
    default: str = "reject"
    default_label: str | None = None

    def __post_init__(self) -> None:
        if self.default not in ("reject", "passthrough", "label"):
            raise RecodeError(f"recode {self.name!r}: bad default policy {self.default!r}")
        if self.default == "label" and not self.default_label:
            raise RecodeError(f"recode {self.name!r}: default=label requires a label value")

    def apply(self, code: str) -> str | None:
        """Map a source code; None means the record must be rejected."""
        hit = self.entries.get(code)
        if hit is not None:
            return hit
        if self.default == "passthrough":
            return code
        if self.default == "label":
            return self.default_label
        return None

    def inverse(self) -> dict[str, str]:
        """Label -> smallest source code, for serialization."""
        inv: dict[str, str] = {}
        for code in sorted(self.entries):
            inv.setdefault(self.entries[code], code)
        return inv


def load_recode_file(path: str | Path, name: str | None = None) -> RecodeMap:
    """Read a recode map CSV.

    First non-blank line is the default directive, e.g. ``#default=reject``
    or ``#default=label:Unknown``; then a ``source_code,target_label``
    header and one row per entry. The map name defaults to the file stem.
    """
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    idx = 0
    while idx < len(lines) and not lines[idx].strip():
        idx += 1
    if idx == len(lines) or not lines[idx].strip().startswith("#default="):
        raise RecodeError(f"{path}: first line must be a #default= directive")
    directive = lines[idx].strip()[len("#default=") :]
    if directive.startswith("label:"):
        default, default_label = "label", directive[len("label:") :]
    else:
        default, default_label = directive, None
    rows = list(csv.reader(lines[idx + 1 :]))
    if not rows or [c.strip() for c in rows[0][:2]] != ["source_code", "target_label"]:
        raise RecodeError(f"{path}: expected header 'source_code,target_label'")
    entries: dict[str, str] = {}
    for i, row in enumerate(rows[1:], start=idx + 3):
        if not row or not "".join(row).strip():
            continue
        if len(row) < 2:
            raise RecodeError(f"{path} line {i}: expected two columns")
        code, label = row[0], row[1]
        if code in entries:
            raise RecodeError(f"{path} line {i}: duplicate source code {code!r}")
        entries[code] = label
    return RecodeMap(name=name or path.stem, entries=entries, default=default, default_label=default_label)


def load_recode_dir(path: str | Path) -> dict[str, RecodeMap]:
    maps = {}
    for p in sorted(Path(path).glob("*.csv")):
        m = load_recode_file(p)
        maps[m.name] = m
    return maps


@dataclass(frozen=True)
class RecordError:
    """A per-record parse failure, emitted in-stream."""

    line_no: int
    cause: str
    field: str | None = None
    detail: str = ""
    weight: float | None = None  # parsed survey weight, when available


def _parse_number(text: str, spec: FieldSpec) -> float:
    text = text.strip()
    if not text:
        raise ValueError("empty numeric field")
    if spec.kind == "integer":
        return float(int(text))
    # decimal: plain digit runs carry an implied decimal point moved by
    # `scale`; an explicit point is taken at face value, then scaled too.
    value = float(int(text)) if ("." not in text and "e" not in text and "E" not in text) else float(text)
    return value / spec.scale if spec.scale != 1 else value


class _RowReader:
    """Extracts raw field text from one input row."""

    def __init__(self, layout: LayoutSpec):
        self.layout = layout

    def fixed(self, line: str, spec: FieldSpec) -> str:
        if len(line) < spec.end - 1:
            raise _FieldFailure(spec.name, "short-line", f"line has {len(line)} chars, field needs {spec.end - 1}")
        return line[spec.start - 1 : spec.end - 1]

    def csv(self, row: Mapping[str, str], spec: FieldSpec) -> str:
        if spec.column not in row or row[spec.column] is None:
            raise _FieldFailure(spec.name, "missing-column", f"column {spec.column!r} missing")
        return row[spec.column]


class _FieldFailure(Exception):
    def __init__(self, field_name: str, cause: str, detail: str):
        super().__init__(detail)
        self.field_name = field_name
        self.cause = cause
        self.detail = detail


def _build_record(
    line_no: int,
    raw_by_role: dict[str, tuple[FieldSpec, str]],
    recodes: Mapping[str, RecodeMap],
) -> ObservationRecord:
    values: dict[str, object] = {}
    weight_seen: float | None = None

    def fail(spec: FieldSpec, cause: str, detail: str) -> _FieldFailure:
        return _FieldFailure(spec.name, cause, detail)

    def decoded(role: str) -> tuple[FieldSpec, str] | None:
        return raw_by_role.get(role)

    def code_value(role: str) -> str | None:
        got = decoded(role)
        if got is None:
            return None
        spec, raw = got
        text = raw.rstrip(" ")
        if spec.recode:
            mapped = recodes[spec.recode].apply(text)
            if mapped is None:
                raise fail(spec, "recode", f"code {text!r} not in recode map {spec.recode!r}")
            return mapped
        return text

    def number_value(role: str) -> float | None:
        got = decoded(role)
        if got is None:
            return None
        spec, raw = got
        try:
            return _parse_number(raw, spec)
        except ValueError as exc:
            raise fail(spec, "bad-number", str(exc)) from None

    # weight first so later failures can still report weighted rejection
    w = number_value("weight")
    if w is None:
        w = 1.0  # role marked absent: records are self-representing
    else:
        spec = raw_by_role["weight"][0]
        if not math.isfinite(w):
            raise fail(spec, "bad-number", "weight is not finite")
        if w < 0.0:
            raise fail(spec, "negative-weight", f"weight {w} < 0")
    weight_seen = w

    try:
        mpce = number_value("mpce")
        if decoded("mpce") is not None and (mpce is None or not math.isfinite(mpce) or mpce <= 0.0):
            raise fail(raw_by_role["mpce"][0], "nonpositive-mpce", f"mpce {mpce!r} must be > 0")

        for role in ("occupation", "industry", "region"):
            values[role] = code_value(role) or "Unknown"

        for role in ("sector", "gender", "social_group"):
            label = code_value(role)
            if label is None:
                label = "Unknown"
            elif label not in _ENUM_ROLES[role]:
                raise fail(
                    raw_by_role[role][0],
                    "invalid-category",
                    f"{role} label {label!r} not in {_ENUM_ROLES[role]}",
                )
            values[role] = label

        age_spec = decoded("age")
        if age_spec is None:
            values["age_group"] = "Unknown"
        else:
            spec, raw = age_spec
            if spec.kind == "code":
                label = code_value("age")
                if label not in AGE_GROUPS:
                    raise fail(spec, "invalid-category", f"age group {label!r} not in {AGE_GROUPS}")
                values["age_group"] = label
            else:
                age_num = number_value("age")
                group = age_group_of(int(age_num)) if age_num is not None else None
                if group is None:
                    raise fail(spec, "age-out-of-range", f"age {age_num!r} below working-age buckets")
                values["age_group"] = group

        profile_labels = {}
        for role, enum_cls in (
            ("enterprise_type", Ownership),
            ("enterprise_size", SizeClass),
            ("job_status", JobStatus),
            ("social_security", SocialSecurity),
        ):
            label = code_value(role)
            if label is None:
                profile_labels[role] = enum_cls("Unknown")
            else:
                try:
                    profile_labels[role] = enum_cls(label)
                except ValueError:
                    raise fail(
                        raw_by_role[role][0],
                        "invalid-category",
                        f"{role} label {label!r} not in {[m.value for m in enum_cls]}",
                    ) from None

        rid = code_value("record_id")
        return ObservationRecord(
            record_id=rid if rid is not None else str(line_no),
            weight=w,
            mpce=mpce,
            occupation=values["occupation"],
            industry=values["industry"],
            sector=values["sector"],
            gender=values["gender"],
            social_group=values["social_group"],
            age_group=values["age_group"],
            region=values["region"],
            enterprise=EnterpriseProfile(
                ownership=profile_labels["enterprise_type"],
                size_class=profile_labels["enterprise_size"],
            ),
            job=JobProfile(
                status=profile_labels["job_status"],
                social_security=profile_labels["social_security"],
            ),
        )
    except _FieldFailure as exc:
        exc.weight = weight_seen  # type: ignore[attr-defined]
        raise


def read_records(
    stream: IO[bytes] | Iterable[bytes],
    layout: LayoutSpec,
    recodes: Mapping[str, RecodeMap] | Iterable[RecodeMap] = (),
) -> Iterator[ObservationRecord | RecordError]:
    """Parse a byte stream into records, one output item per input line.

    Order is preserved; a failure on line k yields a RecordError for item
    k and leaves every other item untouched. Missing referenced recode
    maps or a missing CSV header column abort immediately (StreamError).
    """
    if not isinstance(recodes, Mapping):
        recodes = {m.name: m for m in recodes}
    missing = layout.recode_names() - set(recodes)
    if missing:
        raise StreamError(f"layout references recode maps not provided: {sorted(missing)}")

    reader = _RowReader(layout)
    if layout.format == "fixed":
        yield from _read_fixed(stream, layout, recodes, reader)
    else:
        yield from _read_csv(stream, layout, recodes, reader)


def _read_fixed(stream, layout, recodes, reader) -> Iterator[ObservationRecord | RecordError]:
    for line_no, raw in enumerate(stream, start=1):
        try:
            line = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            yield RecordError(line_no, "encoding", detail=str(exc))
            continue
        line = line.rstrip("\r\n")
        try:
            raw_by_role = {
                f.role: (f, reader.fixed(line, f)) for f in layout.fields if f.role is not None
            }
            yield _build_record(line_no, raw_by_role, recodes)
        except _FieldFailure as exc:
            yield RecordError(
                line_no,
                exc.cause,
                field=exc.field_name,
                detail=exc.detail,
                weight=getattr(exc, "weight", None),
            )


def _read_csv(stream, layout, recodes, reader) -> Iterator[ObservationRecord | RecordError]:
    text = io.TextIOWrapper(_as_readable(stream), encoding="utf-8", newline="")
    rows = csv.reader(text)
    try:
        header = next(rows)
    except StopIteration:
        return
    except (csv.Error, UnicodeDecodeError) as exc:
        raise StreamError(f"cannot read CSV header: {exc}") from None
    index = {name: i for i, name in enumerate(header)}
    needed = {f.column for f in layout.fields if f.role is not None}
    missing = needed - set(index)
    if missing:
        raise StreamError(f"CSV header lacks columns {sorted(missing)}")

    for line_no, row in enumerate(rows, start=2):
        try:
            mapping = {name: row[i] if i < len(row) else None for name, i in index.items()}
            raw_by_role = {
                f.role: (f, reader.csv(mapping, f)) for f in layout.fields if f.role is not None
            }
            yield _build_record(line_no, raw_by_role, recodes)
        except _FieldFailure as exc:
            yield RecordError(
                line_no,
                exc.cause,
                field=exc.field_name,
                detail=exc.detail,
                weight=getattr(exc, "weight", None),
            )


def _as_readable(stream) -> IO[bytes]:
    if hasattr(stream, "read"):
        return stream
    return io.BytesIO(b"".join(stream))


# ---------------------------------------------------------------------------
# serialization (inverse of parsing; used by round-trip checks and emitters)

_ROLE_GETTERS = {
    "weight": lambda r: r.weight,
    "mpce": lambda r: r.mpce,
    "occupation": lambda r: r.occupation,
    "industry": lambda r: r.industry,
    "sector": lambda r: r.sector,
    "gender": lambda r: r.gender,
    "social_group": lambda r: r.social_group,
    "age": lambda r: r.age_group,
    "region": lambda r: r.region,
    "enterprise_type": lambda r: r.enterprise.ownership.value,
    "enterprise_size": lambda r: r.enterprise.size_class.value,
    "job_status": lambda r: r.job.status.value,
    "social_security": lambda r: r.job.social_security.value,
    "record_id": lambda r: r.record_id,
}


def _numeric_role_value(record: ObservationRecord, spec: FieldSpec) -> float:
    value = _ROLE_GETTERS[spec.role](record)
    if spec.role == "age":
        # records keep only the bucket; write its lower edge back
        if value not in AGE_GROUPS:
            raise ValueError(f"record {record.record_id}: age group {value!r} not serializable")
        return float(AGE_BUCKET_EDGES[AGE_GROUPS.index(value)])
    if value is None:
        raise ValueError(f"record {record.record_id}: role {spec.role!r} has no value to serialize")
    return float(value)


def _field_text(record: ObservationRecord, spec: FieldSpec, recodes: Mapping[str, RecodeMap], inverses) -> str:
    if spec.kind in ("decimal", "integer"):
        value = _numeric_role_value(record, spec)
        scaled = int(round(value * spec.scale))
        text = str(scaled)
    else:
        label = str(_ROLE_GETTERS[spec.role](record))
        if spec.recode:
            inv = inverses[spec.recode]
            if label in inv:
                text = inv[label]
            elif recodes[spec.recode].default == "passthrough":
                text = label
            else:
                raise ValueError(
                    f"record {record.record_id}: label {label!r} not producible by recode {spec.recode!r}"
                )
        else:
            text = label
    return text


def write_fixed_width(record: ObservationRecord, layout: LayoutSpec, recodes: Mapping[str, RecodeMap]) -> str:
    """Serialize a record to one fixed-width line under the layout."""
    if layout.format != "fixed":
        raise ValueError("layout is not fixed-width")
    inverses = {name: recodes[name].inverse() for name in layout.recode_names()}
    line = [" "] * layout.record_length
    for spec in layout.fields:
        if spec.role is None:
            continue
        text = _field_text(record, spec, recodes, inverses)
        if len(text) > spec.width:
            raise ValueError(f"value {text!r} does not fit width {spec.width} of field {spec.name!r}")
        if spec.kind in ("decimal", "integer"):
            text = text.rjust(spec.width, "0")
        else:
            text = text.ljust(spec.width)
        line[spec.start - 1 : spec.end - 1] = text
    return "".join(line)


def csv_header(layout: LayoutSpec) -> list[str]:
    return [f.column for f in layout.fields if f.role is not None]


def write_csv_row(record: ObservationRecord, layout: LayoutSpec, recodes: Mapping[str, RecodeMap]) -> list[str]:
    """Serialize a record to a CSV row matching ``csv_header(layout)``."""
    if layout.format != "csv":
        raise ValueError("layout is not CSV")
    inverses = {name: recodes[name].inverse() for name in layout.recode_names()}
    out = []
    for spec in layout.fields:
        if spec.role is None:
            continue
        if spec.kind in ("decimal", "integer"):
            value = _numeric_role_value(record, spec)
            if spec.kind == "integer":
                out.append(str(int(value)))
            elif spec.scale != 1:
                out.append(str(int(round(value * spec.scale))))
            else:
                out.append(repr(value))
        else:
            out.append(_field_text(record, spec, recodes, inverses))
    return out


# ---------------------------------------------------------------------------
# ingest report

@dataclass
class IngestReport:
    """Acceptance/rejection accounting for one ingest pass."""

    total: int = 0
    accepted: int = 0
    rejected: int = 0
    rejected_by_cause: dict[str, int] = dc_field(default_factory=dict)
    accepted_weight: float = 0.0
    rejected_weight: float = 0.0
    rejected_weight_unknown: int = 0

    @property
    def rejected_weight_share(self) -> float:
        known = self.accepted_weight + self.rejected_weight
        return self.rejected_weight / known if known > 0.0 else 0.0

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "accepted": self.accepted,
            "rejected": self.rejected,
            "rejected_by_cause": dict(sorted(self.rejected_by_cause.items())),
            "accepted_weight": self.accepted_weight,
            "rejected_weight": self.rejected_weight,
            "rejected_weight_share": self.rejected_weight_share,
            "rejected_weight_unknown": self.rejected_weight_unknown,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def ingest_summary(results: Iterable[ObservationRecord | RecordError]) -> IngestReport:
    """Fold a parse-result stream into counts and weight totals."""
    report = IngestReport()
    acc_w = NeumaierAccumulator()
    rej_w = NeumaierAccumulator()
    for item in results:
        report.total += 1
        if isinstance(item, RecordError):
            report.rejected += 1
            report.rejected_by_cause[item.cause] = report.rejected_by_cause.get(item.cause, 0) + 1
            if item.weight is None:
                report.rejected_weight_unknown += 1
            else:
                rej_w.add(item.weight)
        else:
            report.accepted += 1
            acc_w.add(item.weight)
    report.accepted_weight = acc_w.total
    report.rejected_weight = rej_w.total
    return report
