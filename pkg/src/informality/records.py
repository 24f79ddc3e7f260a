"""Worker-level observation records and their closed category systems."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class Ownership(str, Enum):
    PROPRIETARY_OR_PARTNERSHIP = "ProprietaryOrPartnership"
    INCORPORATED_OR_OTHER_LEGAL = "IncorporatedOrOtherLegal"
    HOUSEHOLD = "Household"
    UNKNOWN = "Unknown"


class SizeClass(str, Enum):
    LESS_THAN_TEN = "LessThanTen"
    TEN_OR_MORE = "TenOrMore"
    UNKNOWN = "Unknown"


class JobStatus(str, Enum):
    REGULAR_WAGE = "RegularWage"
    CASUAL = "Casual"
    SELF_EMPLOYED = "SelfEmployed"
    UNKNOWN = "Unknown"


class SocialSecurity(str, Enum):
    AVAILABLE = "Available"
    NOT_AVAILABLE = "NotAvailable"
    UNKNOWN = "Unknown"


SECTORS = ("Rural", "Urban")
GENDERS = ("Male", "Female")
SOCIAL_GROUPS = ("ST", "SC", "OBC", "Others")
AGE_GROUPS = ("G1", "G2", "G3", "G4")

# Working-age bucket lower edges: G1 15-24, G2 25-44, G3 45-64, G4 65+.
AGE_BUCKET_EDGES = (15, 25, 45, 65)


def age_group_of(age: int, edges: tuple[int, ...] = AGE_BUCKET_EDGES) -> str | None:
    """Bucket an integer age into G1..G4; None when below the first edge."""
    if age < edges[0]:
        return None
    for i in range(len(edges) - 1, 0, -1):
        if age >= edges[i]:
            return AGE_GROUPS[i]
    return AGE_GROUPS[0]


@dataclass(frozen=True)
class EnterpriseProfile:
    ownership: Ownership = Ownership.UNKNOWN
    size_class: SizeClass = SizeClass.UNKNOWN


@dataclass(frozen=True)
class JobProfile:
    status: JobStatus = JobStatus.UNKNOWN
    social_security: SocialSecurity = SocialSecurity.UNKNOWN


@dataclass(frozen=True)
class ObservationRecord:
    """One worker: survey multiplier, MPCE, and category labels.

    ``weight`` is the number of population persons the record represents.
    ``mpce`` is monthly per-capita consumption expenditure; records with
    mpce absent or <= 0 are rejected before any index computation.
    Category labels come from the recode maps used at ingest; absent roles
    are filled with "Unknown".
    """

    record_id: str
    weight: float
    mpce: float | None
    occupation: str = "Unknown"
    industry: str = "Unknown"
    sector: str = "Unknown"
    gender: str = "Unknown"
    social_group: str = "Unknown"
    age_group: str = "Unknown"
    region: str = "Unknown"
    enterprise: EnterpriseProfile = EnterpriseProfile()
    job: JobProfile = JobProfile()


# Category attributes a record can be grouped or tabulated by.
CATEGORY_FIELDS = (
    "occupation",
    "industry",
    "sector",
    "gender",
    "social_group",
    "age_group",
    "region",
)

# Flat column schema used by CSV emission of normalized records.
RECORD_COLUMNS = (
    "record_id",
    "weight",
    "mpce",
    "occupation",
    "industry",
    "sector",
    "gender",
    "social_group",
    "age_group",
    "region",
    "enterprise_type",
    "enterprise_size",
    "job_status",
    "social_security",
)


def record_to_row(record: ObservationRecord) -> list[str]:
    """Flatten a record into the RECORD_COLUMNS order."""
    return [
        record.record_id,
        repr(record.weight),
        "" if record.mpce is None else repr(record.mpce),
        record.occupation,
        record.industry,
        record.sector,
        record.gender,
        record.social_group,
        record.age_group,
        record.region,
        record.enterprise.ownership.value,
        record.enterprise.size_class.value,
        record.job.status.value,
        record.job.social_security.value,
    ]


def category_value(record: ObservationRecord, category: str) -> str:
    if category not in CATEGORY_FIELDS:
        raise ValueError(f"unknown category {category!r}; expected one of {CATEGORY_FIELDS}")
    return getattr(record, category)
