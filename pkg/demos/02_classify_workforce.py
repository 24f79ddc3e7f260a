"""Classifying workers as formally or informally employed.

Two rules drive everything. An enterprise is informal-sector when it is
proprietary/partnership with fewer than ten workers; employer households
are their own sector. A worker in the informal sector or a household is
informal unless they hold a regular wage job with social security, and a
formal-sector worker without social security is informal too.
"""

import tempfile
from pathlib import Path

from informality.ingest import read_records
from informality.records import (
    EnterpriseProfile,
    JobProfile,
    JobStatus,
    Ownership,
    SizeClass,
    SocialSecurity,
)
from informality.taxonomy import (
    EmploymentClass,
    classify_dataset,
    classify_enterprise,
    classify_worker,
)

from _synth import synthetic_extract

# The rule on a few hand-picked profiles
cases = [
    ("street vendor, own account, <10 workers, no benefits",
     EnterpriseProfile(Ownership.PROPRIETARY_OR_PARTNERSHIP, SizeClass.LESS_THAN_TEN),
     JobProfile(JobStatus.SELF_EMPLOYED, SocialSecurity.NOT_AVAILABLE)),
    ("accountant in a small partnership, regular wage + PF",
     EnterpriseProfile(Ownership.PROPRIETARY_OR_PARTNERSHIP, SizeClass.LESS_THAN_TEN),
     JobProfile(JobStatus.REGULAR_WAGE, SocialSecurity.AVAILABLE)),
    ("contract cleaner in a limited company, no benefits",
     EnterpriseProfile(Ownership.INCORPORATED_OR_OTHER_LEGAL, SizeClass.TEN_OR_MORE),
     JobProfile(JobStatus.REGULAR_WAGE, SocialSecurity.NOT_AVAILABLE)),
    ("domestic worker in an employer household",
     EnterpriseProfile(Ownership.HOUSEHOLD, SizeClass.UNKNOWN),
     JobProfile(JobStatus.CASUAL, SocialSecurity.NOT_AVAILABLE)),
]
for label, ent, job in cases:
    sector = classify_enterprise(ent)
    worker = classify_worker(sector, job)
    print(f"{label}\n  -> sector {sector.value}, employment {worker.value}")
print()

# The rule over a whole extract, with a weighted tally
workdir = Path(tempfile.mkdtemp(prefix="informality-demo-"))
extract = workdir / "extract.txt"
layout, recodes = synthetic_extract(extract, n=4000, seed=13, informal_rate=0.92)

with open(extract, "rb") as fh:
    records = list(read_records(fh, layout, recodes))
stream = classify_dataset(records)
pairs = list(stream)

tally = stream.tally
print(f"classified {len(pairs)} workers")
for cls in EmploymentClass:
    print(
        f"  {cls.value:13s} count={tally.counts[cls]:5d} "
        f"weighted share={tally.weighted_share(cls):.4f}"
    )
