"""Rate coding of pixel images into Bernoulli-per-step spike trains."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import ContractError

INPUT_SIZE = 784


@dataclass(frozen=True)
class SpikeTrain:
    """Time-major binary spikes, shape ``(steps, n_inputs)``."""

    data: np.ndarray
    dt: float = 1.0

    @property
    def steps(self) -> int:
        return self.data.shape[0]

    @property
    def total_spikes(self) -> int:
        return int(self.data.sum())


def _as_generator(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def poisson_encode(
    image,
    intensity: float = 64.0,
    window_ms: float = 100.0,
    dt_ms: float = 1.0,
    seed=None,
) -> SpikeTrain:
    """Encode pixel intensities (0..255) as spike trains.

    Pixel ``p`` fires at ``(p / 255) * intensity`` Hz. Each step spikes
    independently with probability ``rate * dt / 1000``, which approximates a
    Poisson process while that probability stays small. ``seed`` may be an int
    or an existing ``numpy.random.Generator`` (consumed in place).
    """
    if not intensity > 0:
        raise ContractError(f"intensity must be positive, got {intensity}")
    if not dt_ms > 0 or not window_ms > 0:
        raise ContractError("window_ms and dt_ms must be positive")
    steps = round(window_ms / dt_ms)
    if not np.isclose(steps * dt_ms, window_ms, rtol=0, atol=1e-9):
        raise ContractError(f"window {window_ms} ms is not a multiple of dt {dt_ms} ms")

    pixels = np.asarray(image, dtype=np.float64).reshape(-1)
    if (pixels < 0).any():
        raise ContractError("pixel intensities must be non-negative")
    if (pixels > 255).any():
        raise ContractError("pixel intensities must be <= 255")

    prob = pixels / 255.0 * intensity * dt_ms / 1000.0
    if (prob > 1).any():
        raise ContractError("per-step spike probability exceeds 1; lower intensity or dt")
    rng = _as_generator(seed)
    data = (rng.random((steps, pixels.shape[0])) < prob).astype(np.uint8)
    return SpikeTrain(data=data, dt=dt_ms)
