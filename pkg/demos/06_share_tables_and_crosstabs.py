"""Informality share tables and cross-tabulations.

Within-shares split each category row into formal/informal percentages;
across-shares distribute each class over the rows (each across column
adds to 100). Cross-tabs break the same counts down by a second category,
and their marginals reproduce the share table exactly.
"""

import math
import tempfile
from pathlib import Path

from informality.ingest import read_records
from informality.tabulate import cross_tab, share_table
from informality.taxonomy import classify_dataset

from _synth import synthetic_extract

workdir = Path(tempfile.mkdtemp(prefix="informality-demo-"))
extract = workdir / "extract.txt"
layout, recodes = synthetic_extract(extract, n=10_000, seed=23)

with open(extract, "rb") as fh:
    pairs = list(classify_dataset(r for r in read_records(fh, layout, recodes)))

table = share_table(pairs, "occupation")
print(f"occupation share table ({len(table.rows)} rows, "
      f"excluded weight share {table.excluded_weight_share:.4f})")
print(f"{'occupation':22s} {'within-F%':>9s} {'within-I%':>9s} {'across-F%':>9s} {'across-I%':>9s}")
for row in table.rows:
    print(f"{row.label:22s} {row.pct_formal_within:9.2f} {row.pct_informal_within:9.2f} "
          f"{row.pct_of_all_formal_across:9.2f} {row.pct_of_all_informal_across:9.2f}")
print(f"{'column sums':22s} {'':>9s} {'':>9s} "
      f"{math.fsum(r.pct_of_all_formal_across for r in table.rows):9.2f} "
      f"{math.fsum(r.pct_of_all_informal_across for r in table.rows):9.2f}")
print()

xt = cross_tab(pairs, "sector")
print("informal share within each occupation, by sector:")
print(f"{'occupation':22s} {'Rural':>8s} {'Urban':>8s}")
for occ in xt.primary_labels:
    cells = [xt.cell(occ, s).pct_informal_within for s in ("Rural", "Urban")]
    print(f"{occ:22s} {cells[0]:8.2f} {cells[1]:8.2f}")
print()

# marginal consistency with the share table
worst = 0.0
for row in table.rows:
    marg = xt.primary_marginal(row.label)
    worst = max(worst, abs(marg.weight_informal - row.weight_informal))
print(f"largest cross-tab marginal deviation from the share table: {worst:.2e}")
