"""Single-consumer inference queue.

All simulations run on one dedicated thread, in submission order. Admission
is bounded: a request is rejected when ``max_queue_depth`` requests are
already waiting behind the one in progress.
"""
from __future__ import annotations

import itertools
import logging
import math
import threading
import time
from concurrent.futures import Future, ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..core import NetworkModel, poisson_encode, run_network

log = logging.getLogger(__name__)


class QueueFullError(RuntimeError):
    def __init__(self, retry_after_s: int):
        super().__init__(f"inference queue full; retry after {retry_after_s}s")
        self.retry_after_s = retry_after_s


@dataclass
class Prediction:
    pred_all_activity: int
    pred_proportion: int
    total_output_spikes: int
    inference_ms: float
    no_activity: bool
    request_id: int


class InferenceWorker:
    def __init__(
        self,
        model: NetworkModel,
        max_queue_depth: int = 64,
        intensity: float = 64.0,
        window_ms: float = 100.0,
        dt_ms: float = 1.0,
    ):
        self.model = model
        self.max_queue_depth = max_queue_depth
        self.intensity = intensity
        self.window_ms = window_ms
        self.dt_ms = dt_ms
        self._executor = ThreadPoolExecutor(max_workers=1, thread_name_prefix="snn-infer")
        self._lock = threading.Lock()
        self._ids = itertools.count()
        self._pending = 0  # submitted and not yet finished, including the running one
        self._active = 0
        self.max_active_observed = 0
        self.completion_order: list[int] = []
        self._ema_ms: Optional[float] = None

    @property
    def pending(self) -> int:
        return self._pending

    @property
    def queue_depth(self) -> int:
        """Requests waiting behind the running one."""
        return max(0, self._pending - self._active)

    def retry_after_s(self) -> int:
        per = (self._ema_ms or 1000.0) / 1000.0
        return max(1, math.ceil(per * max(self._pending, 1)))

    def submit(self, pixels, seed: Optional[int] = None, intensity: Optional[float] = None) -> Future:
        with self._lock:
            if self._pending > self.max_queue_depth:
                raise QueueFullError(self.retry_after_s())
            self._pending += 1
            rid = next(self._ids)
        try:
            return self._executor.submit(self._run, rid, pixels, seed, intensity)
        except RuntimeError:
            with self._lock:
                self._pending -= 1
            raise

    def _run(self, rid: int, pixels, seed, intensity) -> Prediction:
        with self._lock:
            self._active += 1
            self.max_active_observed = max(self.max_active_observed, self._active)
        try:
            image = np.asarray(pixels, dtype=np.float64)
            t0 = time.perf_counter()
            train = poisson_encode(
                image,
                intensity or self.intensity,
                self.window_ms,
                self.dt_ms,
                np.random.default_rng(seed),
            )
            record = run_network(self.model, train, learning=False)
            elapsed = (time.perf_counter() - t0) * 1000.0
            self._ema_ms = elapsed if self._ema_ms is None else 0.8 * self._ema_ms + 0.2 * elapsed
            return Prediction(
                pred_all_activity=record.pred_all_activity,
                pred_proportion=record.pred_proportion,
                total_output_spikes=record.total_output_spikes,
                inference_ms=elapsed,
                no_activity=record.no_activity,
                request_id=rid,
            )
        finally:
            with self._lock:
                self._active -= 1
                self._pending -= 1
                self.completion_order.append(rid)

    def shutdown(self, wait: bool = True) -> None:
        self._executor.shutdown(wait=wait, cancel_futures=not wait)
