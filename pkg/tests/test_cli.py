import json

import pytest

import informality as inf
from informality.cli import (
    EXIT_CONFIG,
    EXIT_DEGENERATE,
    EXIT_OK,
    EXIT_PARSE,
    main,
)
from informality.ingest import write_fixed_width
from conftest import make_records


@pytest.fixture(scope="module")
def extract(tmp_path_factory, recodes, fixed_layout):
    path = tmp_path_factory.mktemp("data") / "extract.txt"
    records = make_records(300, 2024, recodes)
    path.write_text(
        "\n".join(write_fixed_width(r, fixed_layout, recodes) for r in records) + "\n",
        encoding="utf-8",
    )
    return path


@pytest.fixture(scope="module")
def layout_path():
    return str(inf.data_path("layouts", "worker_fixed.layout"))


def run(*argv):
    return main([str(a) for a in argv])


class TestExitCodes:
    def test_missing_layout_is_config_error(self, extract, tmp_path, monkeypatch):
        monkeypatch.delenv("INFORMALITY_LAYOUT", raising=False)
        code = run("ingest", "--input", extract, "--layout", "/nope.layout", "--output-dir", tmp_path)
        assert code == EXIT_CONFIG

    def test_missing_input_is_config_error(self, layout_path, tmp_path):
        code = run("ingest", "--input", "/does/not/exist", "--layout", layout_path, "--output-dir", tmp_path)
        assert code == EXIT_CONFIG

    def test_unreadable_rows_are_parse_failure(self, layout_path, tmp_path):
        bad = tmp_path / "garbage.txt"
        bad.write_text("@@@@@@\n" * 4, encoding="utf-8")
        code = run("classify", "--input", bad, "--layout", layout_path, "--output-dir", tmp_path)
        assert code == EXIT_PARSE

    def test_degenerate_statistics_exit(self, layout_path, tmp_path, recodes, fixed_layout):
        # all MPCE equal -> zero total index with nonzero groups
        records = make_records(10, 7, recodes)
        records = [
            type(records[0])(**{**records[0].__dict__, "record_id": str(k), "mpce": 500.0})
            for k in range(10)
        ]
        path = tmp_path / "flat.txt"
        path.write_text(
            "\n".join(write_fixed_width(r, fixed_layout, recodes) for r in records) + "\n",
            encoding="utf-8",
        )
        code = run(
            "decompose", "--input", path, "--layout", layout_path,
            "--category", "employment_class", "--output-dir", tmp_path,
        )
        assert code == EXIT_DEGENERATE

    def test_validate_table_ok_on_bundled_fixture(self, tmp_path):
        assert run("validate-table", "--output-dir", tmp_path) == EXIT_OK
        report = json.loads((tmp_path / "validate_table_report.json").read_text())
        assert report["max_cw_deviation"] <= 0.001
        assert any("0.223" in d for d in report["discrepancies"])


class TestOutputs:
    def test_ingest_outputs_and_manifest(self, extract, layout_path, tmp_path):
        assert run("ingest", "--input", extract, "--layout", layout_path, "--output-dir", tmp_path) == EXIT_OK
        assert (tmp_path / "ingest_records.csv").exists()
        report = json.loads((tmp_path / "ingest_report.json").read_text())
        assert report["accepted"] == 300
        manifest = json.loads((tmp_path / "ingest_manifest.json").read_text())
        assert manifest["command"] == "ingest"
        assert str(extract) in manifest["inputs"]
        assert "sha256" in manifest["inputs"][str(extract)]

    def test_idempotent_primary_outputs(self, extract, layout_path, tmp_path):
        a_dir, b_dir = tmp_path / "a", tmp_path / "b"
        for d in (a_dir, b_dir):
            assert run(
                "decompose", "--input", extract, "--layout", layout_path,
                "--category", "employment_class", "--output-dir", d,
            ) == EXIT_OK
        name = "decompose_employment_class.json"
        assert (a_dir / name).read_bytes() == (b_dir / name).read_bytes()
        csv_name = "decompose_employment_class.csv"
        assert (a_dir / csv_name).read_bytes() == (b_dir / csv_name).read_bytes()

    def test_classify_appends_class_column(self, extract, layout_path, tmp_path):
        assert run("classify", "--input", extract, "--layout", layout_path, "--output-dir", tmp_path) == EXIT_OK
        lines = (tmp_path / "classify_records.csv").read_text().splitlines()
        header = lines[0].split(",")
        assert header[-1] == "employment_class"
        classes = {line.rsplit(",", 1)[1] for line in lines[1:]}
        assert classes <= {"Formal", "Informal", "Indeterminate"}

    def test_tabulate_with_secondary_emits_crosstab(self, extract, layout_path, tmp_path):
        assert run(
            "tabulate", "--input", extract, "--layout", layout_path,
            "--category", "occupation", "--secondary", "sector", "--output-dir", tmp_path,
        ) == EXIT_OK
        assert (tmp_path / "tabulate_occupation.csv").exists()
        assert (tmp_path / "crosstab_occupation_sector.csv").exists()

    def test_nested_decompose_closure(self, extract, layout_path, tmp_path):
        assert run(
            "nested-decompose", "--input", extract, "--layout", layout_path,
            "--outer-key", "employment_class", "--inner-key", "occupation",
            "--format", "json", "--output-dir", tmp_path,
        ) == EXIT_OK
        data = json.loads((tmp_path / "nested_employment_class_occupation.json").read_text())
        assert data["grand_closure_pct"] == pytest.approx(100.0, abs=1e-6)

    def test_json_format_for_tabulate(self, extract, layout_path, tmp_path):
        assert run(
            "tabulate", "--input", extract, "--layout", layout_path,
            "--category", "gender", "--format", "json", "--output-dir", tmp_path,
        ) == EXIT_OK
        data = json.loads((tmp_path / "tabulate_gender.json").read_text())
        assert {r["label"] for r in data["rows"]} <= {"Male", "Female"}


class TestTwoRecordOracle:
    def test_decompose_csv_input_matches_naive_oracle(self, tmp_path):
        # two-record CSV in the canonical normalized-records layout
        header = (
            "record_id,weight,mpce,occupation,industry,sector,gender,social_group,"
            "age_group,region,enterprise_type,enterprise_size,job_status,social_security"
        )
        rows = [
            "1,2.0,100.0,Clerks,Education,Urban,Male,Others,G2,001,"
            "IncorporatedOrOtherLegal,TenOrMore,RegularWage,Available",
            "2,3.0,40.0,Elementary,Construction,Rural,Female,SC,G3,002,"
            "ProprietaryOrPartnership,LessThanTen,Casual,NotAvailable",
        ]
        path = tmp_path / "two.csv"
        path.write_text(header + "\n" + "\n".join(rows) + "\n", encoding="utf-8")
        layout = str(inf.data_path("layouts", "records_csv.layout"))
        assert run(
            "decompose", "--input", path, "--layout", layout,
            "--category", "employment_class", "--alpha", "1.3", "--output-dir", tmp_path,
        ) == EXIT_OK

        from test_decompose import naive_decompose

        got = json.loads((tmp_path / "decompose_employment_class.json").read_text())
        ref = naive_decompose([100.0, 40.0], [2.0, 3.0], ["Formal", "Informal"], 1.3)
        assert got["total_index"] == pytest.approx(ref["total"], rel=1e-12)
        assert got["within_index"] == pytest.approx(ref["within"], rel=1e-12, abs=1e-12)
        assert got["between_index"] == pytest.approx(ref["between"], rel=1e-12)
        by_label = {r["label"]: r for r in got["rows"]}
        for label in ("Formal", "Informal"):
            assert by_label[label]["population_share"] == pytest.approx(ref["rows"][label]["P"], rel=1e-12)
            assert by_label[label]["contribution_total_pct"] == pytest.approx(
                ref["rows"][label]["C_t"], rel=1e-12
            )


class TestPipelineEquality:
    def test_classify_then_decompose_equals_fused(self, extract, layout_path, tmp_path, recodes, fixed_layout):
        # fused CLI run
        fused_dir = tmp_path / "fused"
        assert run(
            "decompose", "--input", extract, "--layout", layout_path,
            "--category", "employment_class", "--output-dir", fused_dir,
        ) == EXIT_OK
        fused = json.loads((fused_dir / "decompose_employment_class.json").read_text())

        # two-step: classify via library, then decompose from the pairs
        from informality.decompose import labeled_sample_from_records, decompose
        from informality.ingest import read_records
        from informality.taxonomy import classify_dataset

        with open(extract, "rb") as fh:
            records = [r for r in read_records(fh, fixed_layout, recodes)]
        pairs = list(classify_dataset(records))
        sample, _ = labeled_sample_from_records(pairs, "employment_class")
        result = decompose(sample, 1.3)
        assert result.total_index.value == fused["total_index"]
        assert result.within_index == fused["within_index"]
        assert result.between_index == fused["between_index"]

    def test_env_var_layout_default(self, extract, layout_path, tmp_path, monkeypatch):
        monkeypatch.setenv("INFORMALITY_LAYOUT", layout_path)
        assert run("ingest", "--input", extract, "--output-dir", tmp_path) == EXIT_OK


class TestFilters:
    def test_min_age_drops_lower_buckets(self, extract, layout_path, tmp_path):
        assert run(
            "classify", "--input", extract, "--layout", layout_path,
            "--min-age", "25", "--output-dir", tmp_path,
        ) == EXIT_OK
        lines = (tmp_path / "classify_records.csv").read_text().splitlines()[1:]
        groups = {line.split(",")[8] for line in lines}
        assert "G1" not in groups
        assert groups <= {"G2", "G3", "G4"}

    def test_trim_top_reduces_max_mpce(self, extract, layout_path, tmp_path):
        full_dir, trim_dir = tmp_path / "full", tmp_path / "trim"
        for d, extra in ((full_dir, []), (trim_dir, ["--trim-top", "10"])):
            assert run(
                "classify", "--input", extract, "--layout", layout_path,
                "--output-dir", d, *extra,
            ) == EXIT_OK

        def max_mpce(d):
            lines = (d / "classify_records.csv").read_text().splitlines()[1:]
            return max(float(line.split(",")[2]) for line in lines)

        def rows(d):
            return len((d / "classify_records.csv").read_text().splitlines()) - 1

        assert max_mpce(trim_dir) < max_mpce(full_dir)
        assert rows(trim_dir) < rows(full_dir)

    def test_trim_default_off(self, extract, layout_path, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        for d, extra in ((a, []), (b, ["--trim-top", "0"])):
            assert run(
                "classify", "--input", extract, "--layout", layout_path,
                "--output-dir", d, *extra,
            ) == EXIT_OK
        assert (a / "classify_records.csv").read_bytes() == (b / "classify_records.csv").read_bytes()

    def test_indeterminate_informal_reassignment(self, layout_path, tmp_path, recodes, fixed_layout):
        from informality.records import (
            EnterpriseProfile,
            JobProfile,
            JobStatus,
            ObservationRecord,
            Ownership,
            SizeClass,
            SocialSecurity,
        )
        from informality.ingest import write_fixed_width

        rec = ObservationRecord(
            record_id="1",
            weight=10.0,
            mpce=100.0,
            occupation="Clerks",
            industry="Education",
            sector="Urban",
            gender="Male",
            social_group="Others",
            age_group="G2",
            region="001",
            enterprise=EnterpriseProfile(Ownership.UNKNOWN, SizeClass.UNKNOWN),
            job=JobProfile(JobStatus.UNKNOWN, SocialSecurity.UNKNOWN),
        )
        path = tmp_path / "one.txt"
        path.write_text(write_fixed_width(rec, fixed_layout, recodes) + "\n", encoding="utf-8")
        assert run(
            "classify", "--input", path, "--layout", layout_path,
            "--indeterminate", "informal", "--output-dir", tmp_path,
        ) == EXIT_OK
        body = (tmp_path / "classify_records.csv").read_text().splitlines()[1]
        assert body.endswith(",Informal")
