"""Informal-labour classification and weighted GE inequality decomposition.

The package turns flat survey extracts into worker records (``ingest``),
classifies workers as formally or informally employed (``taxonomy``),
computes weighted Generalized Entropy indices (``stats``), decomposes them
by population subgroups with nested two-level accounting (``decompose``),
and produces informality share tables (``tabulate``). ``cli`` wires the
pieces into a command-line front end.
"""

from importlib import resources
from pathlib import Path

from .decompose import (
    DecompositionResult,
    GroupPartition,
    LabeledSample,
    NestedDecompositionResult,
    ValidationReport,
    decompose,
    labeled_sample_from_records,
    nested_decompose,
    partition,
    subgroup_weights,
    validate_published_table,
)
from .ingest import (
    IngestReport,
    LayoutSpec,
    RecodeMap,
    RecordError,
    ingest_summary,
    load_layout,
    load_recode_dir,
    load_recode_file,
    parse_layout,
    read_records,
    write_csv_row,
    write_fixed_width,
)
from .records import EnterpriseProfile, JobProfile, ObservationRecord
from .stats import GEIndex, WeightedSample, ge_curve, ge_index, weighted_mean
from .tabulate import CrossTab, ShareTable, cross_tab, share_table
from .taxonomy import (
    ClassificationPolicy,
    EmploymentClass,
    SectorClass,
    classify_dataset,
    classify_enterprise,
    classify_record,
    classify_worker,
)

__version__ = "0.1.0"

DEFAULT_ALPHA = 1.3


def data_path(*parts: str) -> Path:
    """Path to a bundled data file (recode maps, layouts, fixtures)."""
    return Path(resources.files(__name__).joinpath("data", *parts))


def default_recodes() -> dict[str, RecodeMap]:
    """The shipped recode maps (NCO-2004/NIC-2008/NSSO 68 code frames)."""
    return load_recode_dir(data_path("recodes"))


def published_fixture_path() -> Path:
    """The bundled published decomposition table (NSSO round 68)."""
    return data_path("fixtures", "nsso68_decomposition.csv")


__all__ = [
    "ClassificationPolicy",
    "CrossTab",
    "DEFAULT_ALPHA",
    "DecompositionResult",
    "EmploymentClass",
    "EnterpriseProfile",
    "GEIndex",
    "GroupPartition",
    "IngestReport",
    "JobProfile",
    "LabeledSample",
    "LayoutSpec",
    "NestedDecompositionResult",
    "ObservationRecord",
    "RecodeMap",
    "RecordError",
    "SectorClass",
    "ShareTable",
    "ValidationReport",
    "WeightedSample",
    "classify_dataset",
    "classify_enterprise",
    "classify_record",
    "classify_worker",
    "cross_tab",
    "data_path",
    "decompose",
    "default_recodes",
    "ge_curve",
    "ge_index",
    "ingest_summary",
    "labeled_sample_from_records",
    "load_layout",
    "load_recode_dir",
    "load_recode_file",
    "nested_decompose",
    "parse_layout",
    "partition",
    "published_fixture_path",
    "read_records",
    "share_table",
    "subgroup_weights",
    "validate_published_table",
    "weighted_mean",
    "write_csv_row",
    "write_fixed_width",
]
