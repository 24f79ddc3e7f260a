import numpy as np
import pytest

import informality as inf
from informality.records import (
    EnterpriseProfile,
    JobProfile,
    JobStatus,
    ObservationRecord,
    Ownership,
    SizeClass,
    SocialSecurity,
)


@pytest.fixture(scope="session")
def recodes():
    return inf.default_recodes()


@pytest.fixture(scope="session")
def fixed_layout():
    return inf.load_layout(inf.data_path("layouts", "worker_fixed.layout"))


INDUSTRY_CODES = ("01", "10", "23", "41", "45", "55", "64", "84", "85", "86", "97")
OCC_CODES = tuple("123456789")


def make_record(rng: np.random.Generator, recodes, record_id: str, informal: bool | None = None) -> ObservationRecord:
    """One synthetic worker record with values on the implied-decimal grid.

    ``informal`` forces a profile whose class is fixed by the decision
    table; None draws a mixed profile.
    """
    if informal is None:
        informal = bool(rng.random() < 0.9)
    if informal:
        ent = EnterpriseProfile(Ownership.PROPRIETARY_OR_PARTNERSHIP, SizeClass.LESS_THAN_TEN)
        job = JobProfile(
            JobStatus.CASUAL if rng.random() < 0.5 else JobStatus.SELF_EMPLOYED,
            SocialSecurity.NOT_AVAILABLE,
        )
    else:
        ent = EnterpriseProfile(Ownership.INCORPORATED_OR_OTHER_LEGAL, SizeClass.TEN_OR_MORE)
        job = JobProfile(JobStatus.REGULAR_WAGE, SocialSecurity.AVAILABLE)
    occ = str(rng.choice(OCC_CODES))
    ind = str(rng.choice(INDUSTRY_CODES))
    return ObservationRecord(
        record_id=record_id,
        weight=float(rng.integers(1, 10_000_000)) / 100,
        mpce=float(rng.integers(5_000, 10_000_000)) / 100,
        occupation=recodes["occupation"].entries[occ],
        industry=recodes["industry"].entries[ind],
        sector="Rural" if rng.random() < 0.6 else "Urban",
        gender="Male" if rng.random() < 0.55 else "Female",
        social_group=str(rng.choice(("ST", "SC", "OBC", "Others"))),
        age_group=str(rng.choice(("G1", "G2", "G3", "G4"))),
        region=f"{int(rng.integers(1, 100)):03d}",
        enterprise=ent,
        job=job,
    )


def make_records(n: int, seed: int, recodes) -> list[ObservationRecord]:
    rng = np.random.default_rng(seed)
    return [make_record(rng, recodes, str(i + 1)) for i in range(n)]
