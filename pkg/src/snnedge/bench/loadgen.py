"""Closed-loop HTTP load generator for the inference service."""
from __future__ import annotations

import logging
import threading
import time
from dataclasses import asdict, dataclass
from typing import Optional

import httpx
import numpy as np

from ..trainer.idx import Dataset, load_mnist, stratified_indices
from .metrics import Outcome, Sample

log = logging.getLogger(__name__)


class BenchSetupError(RuntimeError):
    """The target could not be reached before the run started."""


@dataclass
class BenchConfig:
    url: str = "http://127.0.0.1:8000"
    clients: int = 1
    requests_per_client: int = 50
    data_dir: Optional[str] = None
    split: str = "test"
    timeout_s: float = 180.0
    seed: int = 0
    out: Optional[str] = None
    raw: Optional[str] = None

    def __post_init__(self):
        if self.clients < 1 or self.requests_per_client < 1:
            raise ValueError("clients and requests_per_client must be >= 1")
        self.url = self.url.rstrip("/")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Payload:
    index: int
    digit: int
    pixels: list
    seed: int


def build_payloads(dataset: Dataset, clients: int, requests_per_client: int, seed: int) -> list[list[Payload]]:
    """Stratified request plan: equal requests per digit, dealt round-robin to clients.

    The same (dataset, clients, requests, seed) always yields the same
    sequence for every client.
    """
    total = clients * requests_per_client
    idx = stratified_indices(dataset.labels, total, seed)
    if len(idx) < total:
        # Small datasets: cycle through the stratified order.
        idx = np.resize(idx, total)
    plan: list[list[Payload]] = [[] for _ in range(clients)]
    for k, i in enumerate(idx):
        plan[k % clients].append(
            Payload(
                index=int(i),
                digit=int(dataset.labels[i]),
                pixels=[int(p) for p in dataset.images[i]],
                seed=seed * 1_000_003 + k,
            )
        )
    return plan


def probe_health(url: str, timeout_s: float = 5.0) -> dict:
    try:
        r = httpx.get(f"{url}/healthz", timeout=timeout_s)
    except httpx.HTTPError as exc:
        raise BenchSetupError(f"health probe to {url} failed: {exc}") from exc
    if r.status_code != 200:
        raise BenchSetupError(f"health probe returned HTTP {r.status_code}")
    body = r.json()
    if not body.get("model_loaded", False):
        raise BenchSetupError(f"service at {url} reports no model loaded")
    return body


def _one_request(client: httpx.Client, url: str, p: Payload) -> tuple[Outcome, dict]:
    try:
        r = client.post(f"{url}/predict", json={"pixels": p.pixels, "seed": p.seed})
    except httpx.TimeoutException as exc:
        return Outcome.timeout, {"error": type(exc).__name__}
    except httpx.TransportError as exc:
        return Outcome.connection_error, {"error": f"{type(exc).__name__}: {exc}"}
    if r.status_code == 503:
        return Outcome.overload, {"status_code": 503}
    if r.status_code == 504:
        return Outcome.timeout, {"status_code": 504}
    if r.status_code != 200:
        return Outcome.http_error, {"status_code": r.status_code, "error": r.text[:200]}
    body = r.json()
    return Outcome.ok, {
        "status_code": 200,
        "pred_all_activity": body.get("pred_all_activity"),
        "pred_proportion": body.get("pred_proportion"),
        "total_output_spikes": body.get("total_output_spikes"),
        "inference_ms": body.get("inference_ms"),
    }


def run_benchmark(config: BenchConfig, dataset: Optional[Dataset] = None) -> tuple[list[Sample], float]:
    """Drive the service with ``config.clients`` concurrent closed-loop clients.

    Returns all samples (failures included) and the run duration in seconds,
    measured from the first send to the last completion.
    """
    probe_health(config.url)
    if dataset is None:
        if config.data_dir is None:
            raise BenchSetupError("no dataset given and no data_dir configured")
        dataset = load_mnist(config.data_dir, config.split)
    plan = build_payloads(dataset, config.clients, config.requests_per_client, config.seed)

    samples: list[Sample] = []
    lock = threading.Lock()
    start_gate = threading.Barrier(config.clients + 1)
    origin = [0.0]
    bounds = {"first": None, "last": None}

    def client_loop(cid: int) -> None:
        with httpx.Client(timeout=config.timeout_s) as client:
            start_gate.wait()
            for seq, p in enumerate(plan[cid]):
                t0 = time.perf_counter()
                outcome, extra = _one_request(client, config.url, p)
                t1 = time.perf_counter()
                s = Sample(
                    client=cid,
                    seq=seq,
                    send_ts=t0 - origin[0],
                    latency_ms=(t1 - t0) * 1000.0,
                    outcome=outcome,
                    true_digit=p.digit,
                    **extra,
                )
                with lock:
                    samples.append(s)
                    if bounds["first"] is None or t0 < bounds["first"]:
                        bounds["first"] = t0
                    if bounds["last"] is None or t1 > bounds["last"]:
                        bounds["last"] = t1

    threads = [
        threading.Thread(target=client_loop, args=(c,), name=f"bench-client-{c}", daemon=True)
        for c in range(config.clients)
    ]
    for t in threads:
        t.start()
    origin[0] = time.perf_counter()
    start_gate.wait()
    for t in threads:
        t.join()
    duration = (bounds["last"] - bounds["first"]) if samples else 0.0
    samples.sort(key=lambda s: (s.send_ts, s.client))
    return samples, duration
