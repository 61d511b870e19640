"""Unsupervised training loop and neuron label assignment."""
from __future__ import annotations

import json
import logging
import sys
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

import numpy as np

from ..core import (
    N_CLASSES,
    InhibitionSchedule,
    NetworkModel,
    init_model,
    normalize_input_weights,
    poisson_encode,
    run_network,
    update_inhibition,
)
from ..core.params import ContractError
from .idx import Dataset

log = logging.getLogger(__name__)

PROGRESS_EVERY = 1000


class LabelCoverageError(ValueError):
    """The labelling subset does not contain every digit class."""


@dataclass
class TrainConfig:
    n_exc: int = 400
    epochs: int = 1
    samples: Optional[int] = None  # limit per epoch; None = whole dataset
    intensity: float = 64.0
    window_ms: float = 100.0
    dt_ms: float = 1.0
    seed: int = 0
    norm_target: float = 78.4
    initial_inhibition: float = 10.0
    max_inhibition: float = 40.0
    inhibition_interval: int = 500
    inhibition_increment: float = 0.25
    label_samples: int = 10_000
    w_init_max: float = 0.3
    exc_inh_weight: float = 22.5
    eta_pre: float = 1e-4
    eta_post: float = 1e-2

    def __post_init__(self):
        if self.n_exc < 1 or self.epochs < 1:
            raise ContractError("n_exc and epochs must be positive")
        if self.samples is not None and self.samples < 0:
            raise ContractError("samples must be >= 0")
        for name in ("intensity", "window_ms", "dt_ms", "norm_target"):
            if not getattr(self, name) > 0:
                raise ContractError(f"{name} must be positive")
        steps = round(self.window_ms / self.dt_ms)
        if abs(steps * self.dt_ms - self.window_ms) > 1e-9:
            raise ContractError("window_ms must be a multiple of dt_ms")

    @classmethod
    def reduced(cls, **overrides) -> "TrainConfig":
        """Desk-scale profile: 100 neurons, 10k training samples."""
        base = dict(n_exc=100, samples=10_000, label_samples=10_000)
        base.update(overrides)
        return cls(**base)

    @property
    def schedule(self) -> InhibitionSchedule:
        return InhibitionSchedule(
            initial_magnitude=self.initial_inhibition,
            max_magnitude=self.max_inhibition,
            update_interval=self.inhibition_interval,
            increment_per_update=self.inhibition_increment,
        )

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "TrainConfig":
        known = {k: v for k, v in d.items() if k in cls.__dataclass_fields__}
        return cls(**known)


def json_progress(event: dict) -> None:
    print(json.dumps(event), file=sys.stderr, flush=True)


def _encode(image, config: TrainConfig, rng) -> "object":
    return poisson_encode(image, config.intensity, config.window_ms, config.dt_ms, rng)


def train(
    dataset: Dataset,
    config: TrainConfig,
    progress: Optional[Callable[[dict], None]] = json_progress,
) -> NetworkModel:
    """Train the input weights with STDP, one sample at a time.

    The weight initialisation and every encoding draw come from a single
    generator seeded by ``config.seed``, so runs are bit-reproducible.
    """
    rng = np.random.default_rng(config.seed)
    model = init_model(
        n_exc=config.n_exc,
        seed=rng,
        input_size=dataset.images.shape[1] if len(dataset) else 784,
        dt=config.dt_ms,
        w_init_max=config.w_init_max,
        exc_inh_weight=config.exc_inh_weight,
        schedule=config.schedule,
        eta_pre=config.eta_pre,
        eta_post=config.eta_post,
    )
    normalize_input_weights(model, config.norm_target)
    per_epoch = len(dataset) if config.samples is None else min(config.samples, len(dataset))
    if per_epoch == 0:
        return model

    processed = 0
    spikes_since = 0
    t0 = time.perf_counter()
    for epoch in range(config.epochs):
        for i in range(per_epoch):
            train_spikes = _encode(dataset.images[i], config, rng)
            record = run_network(model, train_spikes, learning=True)
            normalize_input_weights(model, config.norm_target)
            processed += 1
            spikes_since += record.total_output_spikes
            if processed % config.inhibition_interval == 0:
                update_inhibition(model, processed)
            if progress and processed % PROGRESS_EVERY == 0:
                progress(
                    {
                        "event": "train_progress",
                        "epoch": epoch,
                        "samples": processed,
                        "elapsed_s": round(time.perf_counter() - t0, 3),
                        "mean_output_spikes": spikes_since / PROGRESS_EVERY,
                        "inhibition": model.inhibition_magnitude,
                        "theta_mean": float(model.exc_state.theta.mean()),
                    }
                )
                spikes_since = 0
    model.reset_state()
    return model


def label_from_rates(rates: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-neuron argmax over a ``(n_neurons, 10)`` rate table.

    Returns ``(labels, assigned)``; silent neurons get class 0 and
    ``assigned=False``.
    """
    labels = np.argmax(rates, axis=1).astype(np.int64)
    assigned = rates.max(axis=1) > 0
    labels[~assigned] = 0
    return labels, assigned


def assign_neuron_labels(
    model: NetworkModel,
    subset: Dataset,
    config: Optional[TrainConfig] = None,
    seed: Optional[int] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Label each excitatory neuron with the class it fires for most.

    Runs inference with learning off over ``subset`` and stores the labels on
    ``model``. Raises ``LabelCoverageError`` unless all ten digits appear.
    """
    config = config or TrainConfig(n_exc=model.n_exc)
    if len(subset) == 0:
        raise LabelCoverageError("labelling subset is empty")
    present = np.unique(subset.labels)
    missing = sorted(set(range(N_CLASSES)) - set(int(c) for c in present))
    if missing:
        raise LabelCoverageError(f"labelling subset lacks classes {missing}")

    rng = np.random.default_rng(config.seed + 1 if seed is None else seed)
    sums = np.zeros((model.n_exc, N_CLASSES))
    for image, label in zip(subset.images, subset.labels):
        record = run_network(model, _encode(image, config, rng), learning=False)
        sums[:, label] += record.exc_spike_counts
    class_counts = np.bincount(subset.labels, minlength=N_CLASSES)
    rates = sums / class_counts[None, :]
    labels, assigned = label_from_rates(rates)
    model.neuron_labels = labels
    model.label_assigned = assigned
    model.reset_state()
    return labels, assigned
