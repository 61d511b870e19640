from .export import ExportError, export_report, load_report, read_raw_samples, write_raw_samples
from .loadgen import BenchConfig, BenchSetupError, build_payloads, probe_health, run_benchmark
from .metrics import (
    BenchReport,
    Outcome,
    PercentileTable,
    Sample,
    UndefinedStatisticError,
    compute_overhead,
    compute_percentile,
    compute_report,
    percentile_table,
)

__all__ = [
    "BenchConfig",
    "BenchReport",
    "BenchSetupError",
    "ExportError",
    "Outcome",
    "PercentileTable",
    "Sample",
    "UndefinedStatisticError",
    "build_payloads",
    "compute_overhead",
    "compute_percentile",
    "compute_report",
    "export_report",
    "load_report",
    "percentile_table",
    "probe_health",
    "read_raw_samples",
    "run_benchmark",
    "write_raw_samples",
]
