"""Discrete-event model of replicated single-worker inference behind a gateway."""
from .engine import RequestTrace, SimResult, compute_efficiency, scaling_efficiency, simulate
from .routing import ROUTERS, Gateway, route_least_connections, route_random, route_round_robin
from .scenario import (
    POLICIES,
    UNCONTENDED_FIT,
    Deterministic,
    Empirical,
    LogNormal,
    Mixture,
    ScenarioError,
    ServiceTime,
    SimScenario,
    dump_scenario,
    load_scenario,
    parse_scenario,
    parse_service_time,
)

__all__ = [
    "POLICIES",
    "ROUTERS",
    "UNCONTENDED_FIT",
    "Deterministic",
    "Empirical",
    "Gateway",
    "LogNormal",
    "Mixture",
    "RequestTrace",
    "ScenarioError",
    "ServiceTime",
    "SimResult",
    "SimScenario",
    "compute_efficiency",
    "dump_scenario",
    "load_scenario",
    "parse_scenario",
    "parse_service_time",
    "route_least_connections",
    "route_random",
    "route_round_robin",
    "scaling_efficiency",
    "simulate",
]
