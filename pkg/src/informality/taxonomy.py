"""Formal/informal classification of enterprises and workers.

Enterprise rule: unincorporated proprietary or partnership units with
fewer than ten total workers form the informal sector; employer households
are their own sector; incorporated or other independent legal entities are
formal regardless of size.

Worker rule: workers in the informal sector or in households are informal,
except regular wage workers with employer-provided social security; formal
sector workers without social security are informal. Any component the
rule needs but is Unknown makes the outcome Indeterminate (configurable).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, Mapping

from .records import JobProfile, JobStatus, ObservationRecord, Ownership, SizeClass, SocialSecurity
from .records import EnterpriseProfile
from .summation import NeumaierAccumulator


class SectorClass(str, Enum):
    INFORMAL_SECTOR = "InformalSector"
    FORMAL_SECTOR = "FormalSector"
    HOUSEHOLD_SECTOR = "HouseholdSector"
    INDETERMINATE = "Indeterminate"


class EmploymentClass(str, Enum):
    FORMAL = "Formal"
    INFORMAL = "Informal"
    INDETERMINATE = "Indeterminate"


PolicyCell = tuple[SectorClass, JobStatus, SocialSecurity]


@dataclass(frozen=True)
class ClassificationPolicy:
    """Optional overrides of the worker decision table.

    ``overrides`` replaces individual (sector, status, social security)
    cells. ``indeterminate_class`` remaps a final Indeterminate outcome,
    e.g. to Informal for a conservative reading.
    """

    overrides: Mapping[PolicyCell, EmploymentClass] = field(default_factory=dict)
    indeterminate_class: EmploymentClass = EmploymentClass.INDETERMINATE

    def __post_init__(self) -> None:
        for (sector, status, ss), cls in self.overrides.items():
            if not (
                isinstance(sector, SectorClass)
                and isinstance(status, JobStatus)
                and isinstance(ss, SocialSecurity)
                and isinstance(cls, EmploymentClass)
            ):
                raise ValueError(f"invalid policy cell {(sector, status, ss)} -> {cls}")


def classify_enterprise(enterprise: EnterpriseProfile) -> SectorClass:
    """Sector of an enterprise from its ownership and size class."""
    own, size = enterprise.ownership, enterprise.size_class
    if own is Ownership.HOUSEHOLD:
        return SectorClass.HOUSEHOLD_SECTOR
    if own is Ownership.INCORPORATED_OR_OTHER_LEGAL:
        return SectorClass.FORMAL_SECTOR
    if own is Ownership.PROPRIETARY_OR_PARTNERSHIP:
        if size is SizeClass.LESS_THAN_TEN:
            return SectorClass.INFORMAL_SECTOR
        if size is SizeClass.TEN_OR_MORE:
            return SectorClass.FORMAL_SECTOR
        return SectorClass.INDETERMINATE
    return SectorClass.INDETERMINATE


def _worker_cell(sector: SectorClass, status: JobStatus, ss: SocialSecurity) -> EmploymentClass:
    if sector is SectorClass.INDETERMINATE:
        return EmploymentClass.INDETERMINATE
    if sector is SectorClass.FORMAL_SECTOR:
        # Only the social-security test matters in the formal sector.
        if ss is SocialSecurity.NOT_AVAILABLE:
            return EmploymentClass.INFORMAL
        if ss is SocialSecurity.AVAILABLE:
            return EmploymentClass.FORMAL
        return EmploymentClass.INDETERMINATE
    # Informal sector or households: informal unless a regular wage worker
    # has employer-provided social security.
    if status is JobStatus.REGULAR_WAGE:
        if ss is SocialSecurity.AVAILABLE:
            return EmploymentClass.FORMAL
        if ss is SocialSecurity.NOT_AVAILABLE:
            return EmploymentClass.INFORMAL
        return EmploymentClass.INDETERMINATE
    if status is JobStatus.UNKNOWN:
        # Without social security the exception cannot apply; otherwise the
        # status is needed to decide.
        if ss is SocialSecurity.NOT_AVAILABLE:
            return EmploymentClass.INFORMAL
        return EmploymentClass.INDETERMINATE
    return EmploymentClass.INFORMAL


def classify_worker(
    sector: SectorClass,
    job: JobProfile,
    policy: ClassificationPolicy | None = None,
) -> EmploymentClass:
    """Employment class for a worker given the enterprise sector and job."""
    cell = (sector, job.status, job.social_security)
    if policy is not None and cell in policy.overrides:
        result = policy.overrides[cell]
    else:
        result = _worker_cell(*cell)
    if result is EmploymentClass.INDETERMINATE and policy is not None:
        return policy.indeterminate_class
    return result


def classify_record(record: ObservationRecord, policy: ClassificationPolicy | None = None) -> EmploymentClass:
    return classify_worker(classify_enterprise(record.enterprise), record.job, policy)


@dataclass
class ClassTally:
    """Counts and survey-weight totals per employment class.

    Accumulation is commutative, so partial tallies from parallel chunks
    merge without order sensitivity.
    """

    counts: dict[EmploymentClass, int] = field(
        default_factory=lambda: {cls: 0 for cls in EmploymentClass}
    )
    _weights: dict[EmploymentClass, NeumaierAccumulator] = field(
        default_factory=lambda: {cls: NeumaierAccumulator() for cls in EmploymentClass}
    )

    def add(self, record: ObservationRecord, cls: EmploymentClass) -> None:
        self.counts[cls] += 1
        self._weights[cls].add(record.weight)

    def merge(self, other: "ClassTally") -> None:
        for cls in EmploymentClass:
            self.counts[cls] += other.counts[cls]
            self._weights[cls].merge(other._weights[cls])

    def weight(self, cls: EmploymentClass) -> float:
        return self._weights[cls].total

    @property
    def total_weight(self) -> float:
        return sum(self.weight(cls) for cls in EmploymentClass)

    def weighted_share(self, cls: EmploymentClass) -> float:
        total = self.total_weight
        return self.weight(cls) / total if total > 0.0 else 0.0

    def to_dict(self) -> dict:
        return {
            "counts": {cls.value: self.counts[cls] for cls in EmploymentClass},
            "weights": {cls.value: self.weight(cls) for cls in EmploymentClass},
            "weighted_shares": {cls.value: self.weighted_share(cls) for cls in EmploymentClass},
        }


class ClassifiedStream:
    """Iterator of (record, class) pairs that fills a tally as it goes."""

    def __init__(self, records: Iterable[ObservationRecord], policy: ClassificationPolicy | None):
        self._records = records
        self._policy = policy
        self.tally = ClassTally()

    def __iter__(self) -> Iterator[tuple[ObservationRecord, EmploymentClass]]:
        for record in self._records:
            cls = classify_record(record, self._policy)
            self.tally.add(record, cls)
            yield record, cls


def classify_dataset(
    records: Iterable[ObservationRecord],
    policy: ClassificationPolicy | None = None,
) -> ClassifiedStream:
    """Classify a record stream elementwise, preserving order.

    The returned stream exposes ``.tally`` with class counts and weighted
    shares, complete once the stream is exhausted.
    """
    return ClassifiedStream(records, policy)


def load_policy_file(path: str | Path, indeterminate: str = "Indeterminate") -> ClassificationPolicy:
    """Read decision-table overrides from a CSV file.

    Columns: sector_class, job_status, social_security, employment_class.
    Every label must be a member of its enumeration.
    """
    overrides: dict[PolicyCell, EmploymentClass] = {}
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"sector_class", "job_status", "social_security", "employment_class"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ValueError(f"policy file {path}: expected columns {sorted(required)}")
        for i, row in enumerate(reader, start=2):
            try:
                cell = (
                    SectorClass(row["sector_class"].strip()),
                    JobStatus(row["job_status"].strip()),
                    SocialSecurity(row["social_security"].strip()),
                )
                cls = EmploymentClass(row["employment_class"].strip())
            except ValueError as exc:
                raise ValueError(f"policy file {path} line {i}: {exc}") from None
            if cell in overrides:
                raise ValueError(f"policy file {path} line {i}: duplicate cell {cell}")
            overrides[cell] = cls
    return ClassificationPolicy(overrides=overrides, indeterminate_class=EmploymentClass(indeterminate))
