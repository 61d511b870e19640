"""Gateway routing policies over single-worker replicas."""
from __future__ import annotations

from typing import Optional

import numpy as np


class Gateway:
    """Routing state: a round-robin cursor and per-replica in-flight counts.

    A request counts as in flight on its replica from the routing decision
    until its response leaves the gateway.
    """

    def __init__(self, replicas: int, rng: Optional[np.random.Generator] = None):
        if replicas < 1:
            raise ValueError("need at least one replica")
        self.replicas = replicas
        self.cursor = 0
        self.in_flight = [0] * replicas
        self.rng = rng if rng is not None else np.random.default_rng(0)


def route_round_robin(gw: Gateway) -> int:
    # Load-blind: the in-flight counts are never consulted.
    r = gw.cursor % gw.replicas
    gw.cursor += 1
    return r


def route_least_connections(gw: Gateway) -> int:
    depths = gw.in_flight
    return min(range(gw.replicas), key=lambda r: (depths[r], r))


def route_random(gw: Gateway) -> int:
    return int(gw.rng.integers(gw.replicas))


ROUTERS = {
    "round_robin": route_round_robin,
    "least_connections": route_least_connections,
    "random": route_random,
}
