"""Readout of class predictions from excitatory spike counts.

Both decoders group neurons by their assigned class. Ties go to the lower
class index, so an all-silent network predicts class 0; callers detect that
case from the total spike count.
"""
from __future__ import annotations

import numpy as np

from .params import ContractError

N_CLASSES = 10


def _class_totals(counts, labels) -> tuple[np.ndarray, np.ndarray]:
    counts = np.asarray(counts, dtype=np.float64)
    labels = np.asarray(labels)
    if counts.shape != labels.shape:
        raise ContractError(f"counts {counts.shape} and labels {labels.shape} differ in shape")
    if labels.size and (labels.min() < 0 or labels.max() >= N_CLASSES):
        raise ContractError("labels must be assigned classes in [0, 9]")
    totals = np.bincount(labels, weights=counts, minlength=N_CLASSES)
    sizes = np.bincount(labels, minlength=N_CLASSES)
    return totals, sizes


def decode_all_activity(counts, labels) -> int:
    totals, _ = _class_totals(counts, labels)
    # np.argmax returns the first maximum, i.e. the lowest class on ties.
    return int(np.argmax(totals))


def decode_proportion(counts, labels) -> int:
    totals, sizes = _class_totals(counts, labels)
    return int(np.argmax(totals / np.maximum(sizes, 1)))
