import csv

import pytest

from snnedge.bench import (
    ExportError,
    compute_report,
    export_report,
    load_report,
    read_raw_samples,
    write_raw_samples,
)

from test_bench_metrics import random_samples


@pytest.fixture
def samples():
    return random_samples(120, 3)


def test_json_round_trip(tmp_path, samples):
    report = compute_report(samples, 12.5, {"clients": 3})
    export_report(report, tmp_path / "r.json")
    assert load_report(tmp_path / "r.json") == report


def test_csv_has_summary_plus_ten_digit_rows(tmp_path, samples):
    export_report(compute_report(samples, 12.5), tmp_path / "r.csv", fmt="csv")
    with open(tmp_path / "r.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 11
    assert rows[0]["row"] == "summary"
    assert [r["digit"] for r in rows[1:]] == [str(d) for d in range(10)]


def test_raw_dump_one_line_per_sample(tmp_path, samples):
    write_raw_samples(samples, tmp_path / "raw.csv")
    lines = (tmp_path / "raw.csv").read_text().strip().splitlines()
    assert len(lines) - 1 == len(samples)  # minus header
    assert read_raw_samples(tmp_path / "raw.csv") == samples


def test_unwritable_path(tmp_path, samples):
    with pytest.raises(ExportError):
        export_report(compute_report(samples, 1.0), tmp_path / "missing" / "r.json")


def test_unknown_format(tmp_path, samples):
    with pytest.raises(ValueError):
        export_report(compute_report(samples, 1.0), tmp_path / "r.xml", fmt="xml")
