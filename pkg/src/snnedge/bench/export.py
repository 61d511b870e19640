"""Report serialisation: canonical JSON, a flattened CSV, and raw sample dumps."""
from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Sequence

from .metrics import N_DIGITS, BenchReport, Sample


class ExportError(OSError):
    pass


CSV_COLUMNS = [
    "row",
    "digit",
    "count",
    "mean_latency_ms",
    "acc_all_activity",
    "acc_proportion",
    "p50",
    "p75",
    "p95",
    "p99",
    "max",
    "min",
    "tail_ratio",
    "throughput_rps",
    "overhead_ms",
    "ok_count",
    "total_count",
    "duration_s",
]

RAW_COLUMNS = list(Sample.model_fields)


def _summary_row(report: BenchReport) -> dict:
    row = {
        "row": "summary",
        "count": report.ok_count,
        "acc_all_activity": report.accuracy_all_activity,
        "acc_proportion": report.accuracy_proportion,
        "tail_ratio": report.tail_ratio,
        "throughput_rps": report.throughput_rps,
        "overhead_ms": report.infrastructure_overhead_ms,
        "ok_count": report.ok_count,
        "total_count": report.total_count,
        "duration_s": report.duration_s,
    }
    if report.percentiles is not None:
        row.update(report.percentiles.model_dump())
    return row


def _write(path, writer_fn) -> None:
    try:
        with open(path, "w", newline="") as fh:
            writer_fn(fh)
    except OSError as exc:
        raise ExportError(f"cannot write {path}: {exc}") from exc


def export_report(report: BenchReport, path, fmt: str = "json") -> Path:
    path = Path(path)
    if fmt == "json":
        _write(path, lambda fh: fh.write(report.model_dump_json(indent=2)))
    elif fmt == "csv":

        def write_csv(fh):
            w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, restval="")
            w.writeheader()
            w.writerow(_summary_row(report))
            for d in range(N_DIGITS):
                acc_all, acc_prop = report.per_digit_accuracy[d]
                w.writerow(
                    {
                        "row": "digit",
                        "digit": d,
                        "count": report.per_digit_count[d],
                        "mean_latency_ms": report.per_digit_latency_ms[d],
                        "acc_all_activity": acc_all,
                        "acc_proportion": acc_prop,
                    }
                )

        _write(path, write_csv)
    else:
        raise ValueError(f"unknown export format {fmt!r}")
    return path


def load_report(path) -> BenchReport:
    return BenchReport.model_validate(json.loads(Path(path).read_text()))


def write_raw_samples(samples: Sequence[Sample], path) -> Path:
    """One CSV line per sample, columnar for plotting."""
    path = Path(path)

    def write_csv(fh):
        w = csv.DictWriter(fh, fieldnames=RAW_COLUMNS)
        w.writeheader()
        for s in samples:
            row = s.model_dump()
            row["outcome"] = s.outcome.value
            w.writerow(row)

    _write(path, write_csv)
    return path


def read_raw_samples(path) -> list[Sample]:
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            clean = {k: (None if v == "" else v) for k, v in row.items()}
            out.append(Sample.model_validate(clean))
    return out
