"""Simulation scenarios and service-time distributions."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from statistics import NormalDist

import numpy as np

POLICIES = ("round_robin", "least_connections", "random")


class ScenarioError(ValueError):
    pass


class ServiceTime:
    def sample(self, rng: np.random.Generator) -> float:
        raise NotImplementedError

    @property
    def mean(self) -> float:
        raise NotImplementedError

    def spec(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Deterministic(ServiceTime):
    value_ms: float

    def __post_init__(self):
        if not self.value_ms > 0:
            raise ScenarioError("service time must be positive")

    def sample(self, rng):
        return self.value_ms

    @property
    def mean(self):
        return self.value_ms

    def spec(self):
        return f"deterministic:{self.value_ms:g}"


@dataclass(frozen=True)
class LogNormal(ServiceTime):
    """Log-normal service time parameterised by its median and log-scale sigma."""

    median_ms: float
    sigma: float

    def __post_init__(self):
        if not self.median_ms > 0:
            raise ScenarioError("median must be positive")
        if self.sigma < 0:
            raise ScenarioError("sigma must be >= 0")

    @classmethod
    def from_quantiles(cls, p50_ms: float, p_ms: float, q: float = 0.99) -> "LogNormal":
        """Two-quantile fit: the median fixes the location, the q-quantile the scale."""
        if not p_ms > p50_ms > 0:
            raise ScenarioError("need 0 < p50 < upper quantile")
        z = NormalDist().inv_cdf(q)
        return cls(p50_ms, math.log(p_ms / p50_ms) / z)

    def sample(self, rng):
        return self.median_ms * math.exp(self.sigma * rng.standard_normal())

    @property
    def mean(self):
        return self.median_ms * math.exp(self.sigma**2 / 2)

    def quantile(self, q: float) -> float:
        return self.median_ms * math.exp(self.sigma * NormalDist().inv_cdf(q))

    def spec(self):
        return f"lognormal:{self.median_ms:g}:{self.sigma:g}"


@dataclass(frozen=True)
class Empirical(ServiceTime):
    """Resamples observed service times uniformly with replacement."""

    values_ms: tuple
    source: str = ""

    def __post_init__(self):
        if not self.values_ms or min(self.values_ms) <= 0:
            raise ScenarioError("empirical service times must be a non-empty set of positives")

    @classmethod
    def from_file(cls, path) -> "Empirical":
        values = []
        for line in Path(path).read_text().splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            for tok in line.replace(",", " ").split():
                try:
                    values.append(float(tok))
                except ValueError:
                    continue  # header cells
        return cls(tuple(values), str(path))

    def sample(self, rng):
        return self.values_ms[int(rng.integers(len(self.values_ms)))]

    @property
    def mean(self):
        return sum(self.values_ms) / len(self.values_ms)

    def spec(self):
        return f"empirical:{self.source}"


@dataclass(frozen=True)
class Mixture(ServiceTime):
    """Weighted mixture, e.g. for input-dependent bimodal costs."""

    components: tuple
    weights: tuple

    def __post_init__(self):
        if len(self.components) != len(self.weights) or not self.components:
            raise ScenarioError("mixture needs one weight per component")
        if min(self.weights) < 0 or sum(self.weights) <= 0:
            raise ScenarioError("mixture weights must be non-negative with positive sum")

    def sample(self, rng):
        w = np.asarray(self.weights, dtype=float)
        k = int(rng.choice(len(w), p=w / w.sum()))
        return self.components[k].sample(rng)

    @property
    def mean(self):
        total = sum(self.weights)
        return sum(w * c.mean for w, c in zip(self.weights, self.components)) / total

    def spec(self):
        parts = [f"{w:g}@{c.spec()}" for w, c in zip(self.weights, self.components)]
        return "mixture:" + ",".join(parts)


def parse_service_time(text: str) -> ServiceTime:
    """Parse ``deterministic:MS``, ``lognormal:MEDIAN:SIGMA``,
    ``lognormal-fit:P50:P99``, ``empirical:PATH`` or
    ``mixture:W@SPEC,W@SPEC``."""
    kind, _, rest = text.strip().partition(":")
    try:
        if kind == "deterministic":
            return Deterministic(float(rest))
        if kind == "lognormal":
            median, sigma = rest.split(":")
            return LogNormal(float(median), float(sigma))
        if kind == "lognormal-fit":
            p50, p99 = rest.split(":")
            return LogNormal.from_quantiles(float(p50), float(p99))
        if kind == "empirical":
            return Empirical.from_file(rest)
        if kind == "mixture":
            comps, weights = [], []
            for part in rest.split(","):
                w, _, spec = part.partition("@")
                weights.append(float(w))
                comps.append(parse_service_time(spec))
            return Mixture(tuple(comps), tuple(weights))
    except (ValueError, TypeError) as exc:
        if isinstance(exc, ScenarioError):
            raise
        raise ScenarioError(f"bad service time spec {text!r}: {exc}") from None
    raise ScenarioError(f"unknown service time kind {kind!r}")


# Fitted to the uncontended single-replica run: median 749 ms, p99 852 ms.
UNCONTENDED_FIT = LogNormal.from_quantiles(749.0, 852.0)


@dataclass
class SimScenario:
    replicas: int = 1
    clients: int = 1
    requests_per_client: int = 50
    policy: str = "round_robin"
    service_time: ServiceTime = field(default_factory=lambda: UNCONTENDED_FIT)
    network_delay_ms: float = 0.0
    start_jitter_ms: float = 50.0
    seed: int = 0

    def __post_init__(self):
        if isinstance(self.service_time, str):
            self.service_time = parse_service_time(self.service_time)
        if self.replicas < 1 or self.clients < 1:
            raise ScenarioError("replicas and clients must be >= 1")
        if self.requests_per_client < 1:
            raise ScenarioError("requests_per_client must be >= 1")
        if self.policy not in POLICIES:
            raise ScenarioError(f"policy must be one of {POLICIES}, got {self.policy!r}")
        if self.network_delay_ms < 0 or self.start_jitter_ms < 0:
            raise ScenarioError("delays must be >= 0")

    def to_dict(self) -> dict:
        return {
            "replicas": self.replicas,
            "clients": self.clients,
            "requests_per_client": self.requests_per_client,
            "policy": self.policy,
            "service_time": self.service_time.spec(),
            "network_delay_ms": self.network_delay_ms,
            "start_jitter_ms": self.start_jitter_ms,
            "seed": self.seed,
        }


_INT_KEYS = {"replicas", "clients", "requests_per_client", "seed"}
_FLOAT_KEYS = {"network_delay_ms", "start_jitter_ms"}
_KEY_ALIASES = {"requests": "requests_per_client", "service": "service_time"}


def parse_scenario(text: str) -> SimScenario:
    """Read a flat ``key = value`` (or ``key: value``) scenario description."""
    kwargs = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        sep = "=" if "=" in line else (":" if ":" in line else None)
        if sep is None:
            raise ScenarioError(f"line {lineno}: expected key = value")
        key, _, value = line.partition(sep)
        key = _KEY_ALIASES.get(key.strip(), key.strip())
        value = value.strip()
        if key in _INT_KEYS:
            kwargs[key] = int(value)
        elif key in _FLOAT_KEYS:
            kwargs[key] = float(value)
        elif key == "policy":
            kwargs[key] = value
        elif key == "service_time":
            kwargs[key] = parse_service_time(value)
        else:
            raise ScenarioError(f"line {lineno}: unknown key {key!r}")
    return SimScenario(**kwargs)


def load_scenario(path) -> SimScenario:
    return parse_scenario(Path(path).read_text())


def dump_scenario(scenario: SimScenario) -> str:
    return "".join(f"{k} = {v}\n" for k, v in scenario.to_dict().items())

