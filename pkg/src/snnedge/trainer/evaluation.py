"""Accuracy evaluation with both decoders."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..core import N_CLASSES, NetworkModel, run_network
from .idx import Dataset
from .training import TrainConfig, _encode


class ModelStateError(RuntimeError):
    pass


@dataclass
class SampleOutcome:
    index: int
    true_digit: int
    pred_all_activity: int
    pred_proportion: int
    total_output_spikes: int


@dataclass
class AccuracyReport:
    """Counts behind the accuracy figures; accuracies are derived from them.

    Keeping raw counts makes ``merge`` exact and associative, which lets
    evaluation be sharded.
    """

    totals: np.ndarray = field(default_factory=lambda: np.zeros(N_CLASSES, np.int64))
    correct_all: np.ndarray = field(default_factory=lambda: np.zeros(N_CLASSES, np.int64))
    correct_prop: np.ndarray = field(default_factory=lambda: np.zeros(N_CLASSES, np.int64))
    no_activity_count: int = 0
    records: list = field(default_factory=list)

    @property
    def sample_count(self) -> int:
        return int(self.totals.sum())

    @property
    def overall_all_activity(self) -> float:
        return float(self.correct_all.sum() / max(self.sample_count, 1))

    @property
    def overall_proportion(self) -> float:
        return float(self.correct_prop.sum() / max(self.sample_count, 1))

    def per_digit(self) -> list[list[Optional[float]]]:
        """10 rows of ``[all_activity, proportion]``; None for absent digits."""
        rows = []
        for d in range(N_CLASSES):
            n = int(self.totals[d])
            if n == 0:
                rows.append([None, None])
            else:
                rows.append([int(self.correct_all[d]) / n, int(self.correct_prop[d]) / n])
        return rows

    def add(self, outcome: SampleOutcome, keep_record: bool = True) -> None:
        d = outcome.true_digit
        self.totals[d] += 1
        self.correct_all[d] += outcome.pred_all_activity == d
        self.correct_prop[d] += outcome.pred_proportion == d
        self.no_activity_count += outcome.total_output_spikes == 0
        if keep_record:
            self.records.append(outcome)

    def merge(self, other: "AccuracyReport") -> "AccuracyReport":
        return AccuracyReport(
            totals=self.totals + other.totals,
            correct_all=self.correct_all + other.correct_all,
            correct_prop=self.correct_prop + other.correct_prop,
            no_activity_count=self.no_activity_count + other.no_activity_count,
            records=self.records + other.records,
        )

    def to_dict(self) -> dict:
        return {
            "overall_all_activity": self.overall_all_activity,
            "overall_proportion": self.overall_proportion,
            "per_digit": self.per_digit(),
            "no_activity_count": int(self.no_activity_count),
            "sample_count": self.sample_count,
            "per_digit_counts": [int(x) for x in self.totals],
        }


def evaluate(
    model: NetworkModel,
    test_set: Dataset,
    config: Optional[TrainConfig] = None,
    seed: Optional[int] = None,
    indices=None,
) -> AccuracyReport:
    """Classify every sample of ``test_set`` and tally both decoders.

    Model weights are not touched; only the transient neuron state is.
    """
    if not model.labels_ready:
        raise ModelStateError("model has no neuron labels; run assign_neuron_labels first")
    config = config or TrainConfig(n_exc=model.n_exc)
    rng = np.random.default_rng(config.seed + 2 if seed is None else seed)
    if indices is None:
        indices = range(len(test_set))
    report = AccuracyReport()
    for i in indices:
        record = run_network(model, _encode(test_set.images[i], config, rng), learning=False)
        report.add(
            SampleOutcome(
                index=int(i),
                true_digit=int(test_set.labels[i]),
                pred_all_activity=record.pred_all_activity,
                pred_proportion=record.pred_proportion,
                total_output_spikes=record.total_output_spikes,
            )
        )
    model.reset_state()
    return report
