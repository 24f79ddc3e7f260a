import math

import pytest

from informality.records import (
    EnterpriseProfile,
    JobProfile,
    JobStatus,
    ObservationRecord,
    Ownership,
    SizeClass,
    SocialSecurity,
)
from informality.tabulate import ZeroWeightCategoryError, cross_tab, share_table
from informality.taxonomy import EmploymentClass

F, I, X = EmploymentClass.FORMAL, EmploymentClass.INFORMAL, EmploymentClass.INDETERMINATE

INFORMAL_PROFILE = (
    EnterpriseProfile(Ownership.PROPRIETARY_OR_PARTNERSHIP, SizeClass.LESS_THAN_TEN),
    JobProfile(JobStatus.CASUAL, SocialSecurity.NOT_AVAILABLE),
)
FORMAL_PROFILE = (
    EnterpriseProfile(Ownership.INCORPORATED_OR_OTHER_LEGAL, SizeClass.TEN_OR_MORE),
    JobProfile(JobStatus.REGULAR_WAGE, SocialSecurity.AVAILABLE),
)


def pair(cls, weight, rid="r", **category):
    ent, job = INFORMAL_PROFILE if cls is I else FORMAL_PROFILE
    rec = ObservationRecord(
        record_id=rid, weight=weight, mpce=100.0, enterprise=ent, job=job, **category
    )
    return rec, cls


class TestShareTable:
    def test_single_value_all_informal(self):
        pairs = [pair(I, 10.0, occupation="Elementary")]
        table = share_table(pairs, "occupation")
        row = table.row("Elementary")
        assert (row.pct_formal_within, row.pct_informal_within) == (0.0, 100.0)
        assert row.pct_of_all_informal_across == 100.0

    def test_two_value_arithmetic(self):
        pairs = [
            pair(I, 30.0, occupation="A"),
            pair(F, 10.0, occupation="A"),
            pair(I, 70.0, occupation="B"),
            pair(F, 10.0, occupation="B"),
        ]
        table = share_table(pairs, "occupation")
        a, b = table.row("A"), table.row("B")
        assert a.pct_of_all_informal_across == pytest.approx(30.0)
        assert b.pct_of_all_informal_across == pytest.approx(70.0)
        assert a.pct_formal_within == pytest.approx(25.0)
        assert a.pct_informal_within == pytest.approx(75.0)

    def test_within_pcts_sum_to_100_per_row(self):
        pairs = [
            pair(I, 3.7, occupation="A"),
            pair(F, 1.1, occupation="A"),
            pair(I, 0.9, occupation="B"),
            pair(F, 2.3, occupation="B"),
            pair(I, 5.5, occupation="C"),
        ]
        table = share_table(pairs, "occupation")
        for row in table.rows:
            assert row.pct_formal_within + row.pct_informal_within == pytest.approx(100.0, abs=1e-9)
        assert math.fsum(r.pct_of_all_formal_across for r in table.rows) == pytest.approx(100.0, abs=1e-9)
        assert math.fsum(r.pct_of_all_informal_across for r in table.rows) == pytest.approx(100.0, abs=1e-9)

    def test_indeterminate_excluded_and_disclosed(self):
        ent = EnterpriseProfile(Ownership.UNKNOWN, SizeClass.UNKNOWN)
        job = JobProfile(JobStatus.UNKNOWN, SocialSecurity.UNKNOWN)
        unknown = ObservationRecord(record_id="x", weight=10.0, mpce=1.0, enterprise=ent, job=job, occupation="A")
        pairs = [pair(I, 30.0, occupation="A"), (unknown, X)]
        table = share_table(pairs, "occupation")
        assert table.excluded_weight_share == pytest.approx(0.25)
        assert table.row("A").pct_informal_within == 100.0

    def test_zero_weight_category_raises(self):
        ent = EnterpriseProfile(Ownership.UNKNOWN, SizeClass.UNKNOWN)
        job = JobProfile(JobStatus.UNKNOWN, SocialSecurity.UNKNOWN)
        unknown = ObservationRecord(record_id="x", weight=10.0, mpce=1.0, enterprise=ent, job=job)
        with pytest.raises(ZeroWeightCategoryError):
            share_table([(unknown, X)], "occupation")

    def test_informality_ordering_fixture(self):
        # classes 7, 9, 1, 6 engineered more informal within than 4, 3, 2
        high = {"Craft and Trades": 7, "Elementary": 9, "Managers": 1, "Skilled Agricultural": 6}
        low = {"Clerks": 4, "Technicians": 3, "Professionals": 2}
        pairs = []
        for occ in high:
            pairs.append(pair(I, 90.0, occupation=occ))
            pairs.append(pair(F, 10.0, occupation=occ))
        for occ in low:
            pairs.append(pair(I, 35.0, occupation=occ))
            pairs.append(pair(F, 65.0, occupation=occ))
        table = share_table(pairs, "occupation")
        worst_low = max(table.row(occ).pct_informal_within for occ in low)
        best_high = min(table.row(occ).pct_informal_within for occ in high)
        assert best_high > worst_low

    def test_adding_zero_weight_row_changes_nothing(self):
        pairs = [pair(I, 5.0, occupation="A"), pair(F, 5.0, occupation="B")]
        base = share_table(pairs, "occupation")
        extended = share_table(pairs + [pair(I, 0.0, occupation="Z")], "occupation")
        assert [r.to_dict() for r in extended.rows if r.label != "Z"] == [
            r.to_dict() for r in base.rows
        ]

    def test_across_reconciles_with_within(self):
        pairs = [
            pair(I, 12.0, occupation="A"),
            pair(F, 6.0, occupation="A"),
            pair(I, 3.0, occupation="B"),
            pair(F, 9.0, occupation="B"),
        ]
        table = share_table(pairs, "occupation")
        total_informal_mass = math.fsum(
            r.pct_informal_within * r.weighted_count for r in table.rows
        )
        for r in table.rows:
            expect = 100.0 * (r.pct_informal_within * r.weighted_count) / total_informal_mass
            assert r.pct_of_all_informal_across == pytest.approx(expect, abs=1e-9)


class TestCrossTab:
    def test_constant_secondary_collapses_to_share_table(self):
        pairs = [
            pair(I, 4.0, occupation="A", sector="Rural"),
            pair(F, 6.0, occupation="A", sector="Rural"),
            pair(I, 5.0, occupation="B", sector="Rural"),
        ]
        xt = cross_tab(pairs, "sector")
        table = share_table(pairs, "occupation")
        for row in table.rows:
            cell = xt.cell(row.label, "Rural")
            assert cell.weight_formal == pytest.approx(row.weight_formal)
            assert cell.weight_informal == pytest.approx(row.weight_informal)

    def test_single_cell_marginals(self):
        pairs = [pair(I, 7.0, occupation="Skilled Agricultural", sector="Rural")]
        xt = cross_tab(pairs, "sector")
        assert xt.cell("Skilled Agricultural", "Rural").weight_informal == 7.0
        marg = xt.primary_marginal("Skilled Agricultural")
        assert marg.weight_informal == 7.0
        assert marg.weight_formal == 0.0

    def test_marginals_match_share_table_counts(self):
        import numpy as np

        rng = np.random.default_rng(77)
        pairs = []
        for k in range(300):
            cls = I if rng.random() < 0.8 else F
            pairs.append(
                pair(
                    cls,
                    float(rng.integers(1, 1000)) / 10,
                    rid=str(k),
                    occupation=str(rng.choice(["A", "B", "C"])),
                    age_group=str(rng.choice(["G1", "G2", "G3", "G4"])),
                )
            )
        xt = cross_tab(pairs, "age_group")
        table = share_table(pairs, "occupation")
        for row in table.rows:
            marg = xt.primary_marginal(row.label)
            assert marg.weight_formal == pytest.approx(row.weight_formal, abs=1e-9)
            assert marg.weight_informal == pytest.approx(row.weight_informal, abs=1e-9)

    def test_age_extremes_lead_informality_fixture(self):
        # engineered so G1 and G4 carry the highest informal share in
        # every occupation class
        pairs = []
        rid = 0
        for occ in ("Managers", "Clerks", "Elementary"):
            for group, informal_w, formal_w in (
                ("G1", 9.0, 1.0),
                ("G2", 5.0, 5.0),
                ("G3", 4.0, 6.0),
                ("G4", 8.5, 1.5),
            ):
                rid += 1
                pairs.append(pair(I, informal_w, rid=f"i{rid}", occupation=occ, age_group=group))
                pairs.append(pair(F, formal_w, rid=f"f{rid}", occupation=occ, age_group=group))
        xt = cross_tab(pairs, "age_group")
        for occ in ("Managers", "Clerks", "Elementary"):
            shares = {g: xt.cell(occ, g).pct_informal_within for g in ("G1", "G2", "G3", "G4")}
            assert min(shares["G1"], shares["G4"]) > max(shares["G2"], shares["G3"])

    def test_pooling_two_secondary_labels_sums_cells(self):
        pairs = [
            pair(I, 2.0, occupation="A", sector="Rural"),
            pair(I, 3.0, occupation="A", sector="Urban"),
            pair(F, 4.0, occupation="A", sector="Rural"),
        ]
        xt = cross_tab(pairs, "sector")
        pooled_info = xt.cell("A", "Rural").weight_informal + xt.cell("A", "Urban").weight_informal
        pooled_formal = xt.cell("A", "Rural").weight_formal + xt.cell("A", "Urban").weight_formal
        merged = [
            pair(I, 2.0, occupation="A", sector="Rural"),
            pair(I, 3.0, occupation="A", sector="Rural"),
            pair(F, 4.0, occupation="A", sector="Rural"),
        ]
        xt2 = cross_tab(merged, "sector")
        assert xt2.cell("A", "Rural").weight_informal == pooled_info
        assert xt2.cell("A", "Rural").weight_formal == pooled_formal
