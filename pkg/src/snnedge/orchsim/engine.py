"""Event-driven simulation of closed-loop clients, a routing gateway and
single-worker FIFO replicas."""
from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..bench.metrics import BenchReport, Outcome, Sample, compute_report
from .routing import ROUTERS, Gateway
from .scenario import SimScenario

# Same-time ordering: completions free capacity before new work is placed.
SERVICE_END, RESPONSE, SERVICE_START, DISPATCH, ARRIVAL = range(5)
KIND_NAMES = ("service_end", "response", "service_start", "dispatch", "arrival")


@dataclass
class RequestTrace:
    request_id: int
    client: int
    seq: int
    arrival: float
    replica: int = -1
    dispatch: float = float("nan")
    service_start: float = float("nan")
    service_end: float = float("nan")
    response: float = float("nan")
    service_ms: float = float("nan")

    @property
    def latency_ms(self) -> float:
        return self.response - self.arrival


@dataclass
class SimResult:
    scenario: SimScenario
    requests: list[RequestTrace]
    replica_busy_ms: list[float]
    replica_requests: list[int]
    duration_ms: float
    # (time, in-flight per replica) after each batch of same-time events.
    depth_trace: Optional[list] = None
    service_order: list[list[int]] = field(default_factory=list)
    dispatch_order: list[list[int]] = field(default_factory=list)

    @property
    def latencies_ms(self) -> list[float]:
        return [r.latency_ms for r in self.requests]

    @property
    def throughput_rps(self) -> float:
        return len(self.requests) / (self.duration_ms / 1000.0) if self.duration_ms > 0 else 0.0

    @property
    def mean_service_ms(self) -> float:
        return float(np.mean([r.service_ms for r in self.requests]))

    @property
    def utilization(self) -> list[float]:
        d = self.duration_ms
        return [b / d if d > 0 else 0.0 for b in self.replica_busy_ms]

    def samples(self) -> list[Sample]:
        t0 = min(r.arrival for r in self.requests)
        return [
            Sample(
                client=r.client,
                seq=r.seq,
                send_ts=(r.arrival - t0) / 1000.0,
                latency_ms=r.latency_ms,
                outcome=Outcome.ok,
                inference_ms=r.service_ms,
            )
            for r in self.requests
        ]

    def report(self) -> BenchReport:
        rep = compute_report(self.samples(), self.duration_ms / 1000.0, self.scenario.to_dict())
        rep.replica_utilization = self.utilization
        rep.replica_requests = list(self.replica_requests)
        rep.efficiency = compute_efficiency(self, self.scenario)
        return rep


class _Replica:
    __slots__ = ("queue", "busy", "busy_ms", "served")

    def __init__(self):
        self.queue: list[int] = []
        self.busy = False
        self.busy_ms = 0.0
        self.served = 0


def simulate(scenario: SimScenario, trace_depths: bool = False) -> SimResult:
    """Run ``scenario`` to completion; fully determined by ``scenario.seed``."""
    rng = np.random.default_rng(scenario.seed)
    gw = Gateway(scenario.replicas, rng)
    route = ROUTERS[scenario.policy]
    replicas = [_Replica() for _ in range(scenario.replicas)]
    delay = scenario.network_delay_ms
    service_order = [[] for _ in replicas]
    dispatch_order = [[] for _ in replicas]

    events: list = []
    seq = itertools.count()
    ids = itertools.count()
    traces: list[RequestTrace] = []
    remaining = [scenario.requests_per_client] * scenario.clients
    sent = [0] * scenario.clients
    depth_trace = [] if trace_depths else None

    def push(t: float, kind: int, rid: int) -> None:
        heapq.heappush(events, (t, kind, rid, next(seq)))

    def new_request(client: int, t: float) -> None:
        rid = next(ids)
        traces.append(RequestTrace(rid, client, sent[client], t))
        sent[client] += 1
        remaining[client] -= 1
        push(t, ARRIVAL, rid)

    jitter = rng.uniform(0.0, scenario.start_jitter_ms, size=scenario.clients)
    for c in range(scenario.clients):
        new_request(c, float(jitter[c]) if scenario.start_jitter_ms > 0 else 0.0)

    while events:
        t, kind, rid, _ = heapq.heappop(events)
        req = traces[rid]
        if kind == ARRIVAL:
            r = route(gw)
            req.replica = r
            gw.in_flight[r] += 1
            push(t + delay, DISPATCH, rid)
        elif kind == DISPATCH:
            rep = replicas[req.replica]
            req.dispatch = t
            dispatch_order[req.replica].append(rid)
            if rep.busy:
                rep.queue.append(rid)
            else:
                rep.busy = True
                push(t, SERVICE_START, rid)
        elif kind == SERVICE_START:
            req.service_start = t
            req.service_ms = float(scenario.service_time.sample(rng))
            service_order[req.replica].append(rid)
            push(t + req.service_ms, SERVICE_END, rid)
        elif kind == SERVICE_END:
            rep = replicas[req.replica]
            req.service_end = t
            rep.busy_ms += req.service_ms
            rep.served += 1
            push(t + delay, RESPONSE, rid)
            if rep.queue:
                push(t, SERVICE_START, rep.queue.pop(0))
            else:
                rep.busy = False
        else:  # RESPONSE
            req.response = t
            gw.in_flight[req.replica] -= 1
            if remaining[req.client] > 0:
                new_request(req.client, t)
        if depth_trace is not None and (not events or events[0][0] > t):
            depth_trace.append((t, tuple(gw.in_flight), all(r > 0 for r in remaining)))

    first = min(r.arrival for r in traces)
    last = max(r.response for r in traces)
    return SimResult(
        scenario=scenario,
        requests=traces,
        replica_busy_ms=[r.busy_ms for r in replicas],
        replica_requests=[r.served for r in replicas],
        duration_ms=last - first,
        depth_trace=depth_trace,
        service_order=service_order,
        dispatch_order=dispatch_order,
    )


def scaling_efficiency(throughput_rps: float, replicas: int, per_worker_rps: float) -> float:
    """Observed throughput as a fraction of ``replicas * per_worker_rps``."""
    return throughput_rps / (replicas * per_worker_rps)


def compute_efficiency(result: SimResult, scenario: Optional[SimScenario] = None) -> float:
    """Throughput over ideal capacity R * 1000 / mean service time.

    The mean is taken over the service times actually drawn in this run, so
    the ratio cannot exceed 1 because of sampling luck.
    """
    scenario = scenario or result.scenario
    return scaling_efficiency(result.throughput_rps, scenario.replicas, 1000.0 / result.mean_service_ms)
