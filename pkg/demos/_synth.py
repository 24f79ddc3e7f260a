"""Shared synthetic-extract builder for the demo scripts.

Generates a seeded fixed-width worker extract in the bundled layout, with
an informality rate and an MPCE gap between formal and informal workers so
the decomposition demos have something to decompose.
"""

import numpy as np

import informality as inf
from informality.ingest import write_fixed_width
from informality.records import (
    EnterpriseProfile,
    JobProfile,
    JobStatus,
    ObservationRecord,
    Ownership,
    SizeClass,
    SocialSecurity,
)

INDUSTRY_CODES = ["01", "10", "23", "41", "45", "55", "64", "84", "85", "86"]


def synthetic_extract(path, n=5000, seed=7, informal_rate=0.9):
    rng = np.random.default_rng(seed)
    recodes = inf.default_recodes()
    layout = inf.load_layout(inf.data_path("layouts", "worker_fixed.layout"))
    occ_titles = list(recodes["occupation"].entries.values())

    lines = []
    for i in range(n):
        informal = rng.random() < informal_rate
        if informal:
            ent = EnterpriseProfile(Ownership.PROPRIETARY_OR_PARTNERSHIP, SizeClass.LESS_THAN_TEN)
            job = JobProfile(
                JobStatus.CASUAL if rng.random() < 0.4 else JobStatus.SELF_EMPLOYED,
                SocialSecurity.NOT_AVAILABLE,
            )
            mpce = rng.lognormal(7.0, 0.45)
        else:
            ent = EnterpriseProfile(Ownership.INCORPORATED_OR_OTHER_LEGAL, SizeClass.TEN_OR_MORE)
            job = JobProfile(JobStatus.REGULAR_WAGE, SocialSecurity.AVAILABLE)
            mpce = rng.lognormal(7.8, 0.5)
        rec = ObservationRecord(
            record_id=str(i + 1),
            weight=float(rng.integers(50, 40000)) / 100,
            mpce=round(mpce, 2),
            occupation=occ_titles[int(rng.integers(0, 9))],
            industry=recodes["industry"].entries[str(rng.choice(INDUSTRY_CODES))],
            sector="Rural" if rng.random() < 0.65 else "Urban",
            gender="Male" if rng.random() < 0.55 else "Female",
            social_group=str(rng.choice(["ST", "SC", "OBC", "Others"])),
            age_group=str(rng.choice(["G1", "G2", "G3", "G4"], p=[0.2, 0.4, 0.3, 0.1])),
            region=f"{int(rng.integers(1, 80)):03d}",
            enterprise=ent,
            job=job,
        )
        lines.append(write_fixed_width(rec, layout, recodes))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    return layout, recodes
