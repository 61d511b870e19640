"""Latency statistics and the benchmark report.

Percentiles use the nearest-rank definition: the value at 1-based position
ceil(p/100 * N) of the ascending sample. No interpolation, so every reported
percentile is an observed latency.
"""
from __future__ import annotations

import math
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

from pydantic import BaseModel, Field

N_DIGITS = 10
PERCENTILES = (50, 75, 95, 99)


class UndefinedStatisticError(ValueError):
    pass


class Outcome(str, Enum):
    ok = "ok"
    timeout = "timeout"
    connection_error = "connection_error"
    http_error = "http_error"
    overload = "overload"


class Sample(BaseModel):
    client: int = 0
    seq: int = 0
    send_ts: float = 0.0  # seconds since run start
    latency_ms: float
    outcome: Outcome = Outcome.ok
    true_digit: Optional[int] = None
    pred_all_activity: Optional[int] = None
    pred_proportion: Optional[int] = None
    total_output_spikes: Optional[int] = None
    inference_ms: Optional[float] = None
    status_code: Optional[int] = None
    error: Optional[str] = None


class PercentileTable(BaseModel):
    p50: float
    p75: float
    p95: float
    p99: float
    max: float
    min: float


class BenchReport(BaseModel):
    percentiles: Optional[PercentileTable] = None
    tail_ratio: Optional[float] = None
    throughput_rps: float = 0.0
    infrastructure_overhead_ms: Optional[float] = None
    accuracy_all_activity: Optional[float] = None
    accuracy_proportion: Optional[float] = None
    per_digit_latency_ms: list[Optional[float]] = Field(default_factory=lambda: [None] * N_DIGITS)
    per_digit_accuracy: list[list[Optional[float]]] = Field(
        default_factory=lambda: [[None, None] for _ in range(N_DIGITS)]
    )
    per_digit_count: list[int] = Field(default_factory=lambda: [0] * N_DIGITS)
    failures: dict[str, int] = Field(default_factory=dict)
    ok_count: int = 0
    total_count: int = 0
    mean_inference_ms: Optional[float] = None
    mean_output_spikes: Optional[float] = None
    duration_s: float = 0.0
    config: dict = Field(default_factory=dict)
    # Simulator output only.
    replica_utilization: Optional[list[float]] = None
    replica_requests: Optional[list[int]] = None
    efficiency: Optional[float] = None


def _rank(p, n: int) -> int:
    frac = Fraction(str(p)) if isinstance(p, float) else Fraction(p)
    return max(1, math.ceil(frac * n / 100))


def compute_percentile(sorted_values: Sequence[float], p) -> float:
    """Nearest-rank percentile of an ascending sequence."""
    n = len(sorted_values)
    if n == 0:
        raise UndefinedStatisticError("percentile of an empty sample is undefined")
    if not 0 < p <= 100:
        raise ValueError(f"p must lie in (0, 100], got {p}")
    return sorted_values[_rank(p, n) - 1]


def percentile_table(latencies: Sequence[float]) -> PercentileTable:
    xs = sorted(latencies)
    if not xs:
        raise UndefinedStatisticError("no latencies to summarise")
    values = {f"p{p}": compute_percentile(xs, p) for p in PERCENTILES}
    return PercentileTable(**values, max=xs[-1], min=xs[0])


def _ok_latencies(samples) -> list[float]:
    out = []
    for s in samples:
        if isinstance(s, (int, float)):
            out.append(float(s))
        elif s.outcome == Outcome.ok:
            out.append(s.latency_ms)
    return out


def compute_overhead(samples) -> float:
    """Median minus minimum latency over successful samples.

    Accepts Sample objects or bare latency numbers.
    """
    xs = sorted(_ok_latencies(samples))
    if not xs:
        raise UndefinedStatisticError("overhead needs at least one successful sample")
    return compute_percentile(xs, 50) - xs[0]


def _mean(xs) -> Optional[float]:
    xs = list(xs)
    return sum(xs) / len(xs) if xs else None


def compute_report(samples: Sequence[Sample], duration_s: float, config: Optional[dict] = None) -> BenchReport:
    """Aggregate raw samples into a report.

    Throughput counts only successful requests. Per-digit groups with no
    successful sample are reported as None rather than zero.
    """
    ok = [s for s in samples if s.outcome == Outcome.ok]
    failures = {o.value: 0 for o in Outcome}
    for s in samples:
        failures[s.outcome.value] += 1

    report = BenchReport(
        failures=failures,
        ok_count=len(ok),
        total_count=len(samples),
        duration_s=duration_s,
        throughput_rps=len(ok) / duration_s if duration_s > 0 else 0.0,
        config=config or {},
    )
    if ok:
        table = percentile_table([s.latency_ms for s in ok])
        report.percentiles = table
        report.tail_ratio = table.p99 / table.p50 if table.p50 > 0 else None
        report.infrastructure_overhead_ms = table.p50 - table.min
        report.mean_inference_ms = _mean(s.inference_ms for s in ok if s.inference_ms is not None)
        report.mean_output_spikes = _mean(
            s.total_output_spikes for s in ok if s.total_output_spikes is not None
        )

    labelled = [s for s in ok if s.true_digit is not None]
    if labelled:
        with_all = [s for s in labelled if s.pred_all_activity is not None]
        with_prop = [s for s in labelled if s.pred_proportion is not None]
        if with_all:
            report.accuracy_all_activity = sum(
                s.pred_all_activity == s.true_digit for s in with_all
            ) / len(with_all)
        if with_prop:
            report.accuracy_proportion = sum(
                s.pred_proportion == s.true_digit for s in with_prop
            ) / len(with_prop)
    for d in range(N_DIGITS):
        group = [s for s in labelled if s.true_digit == d]
        report.per_digit_count[d] = len(group)
        if not group:
            continue
        report.per_digit_latency_ms[d] = _mean(s.latency_ms for s in group)
        acc = []
        for attr in ("pred_all_activity", "pred_proportion"):
            preds = [getattr(s, attr) for s in group if getattr(s, attr) is not None]
            acc.append(sum(p == d for p in preds) / len(preds) if preds else None)
        report.per_digit_accuracy[d] = acc
    return report
