import os
from dataclasses import dataclass


@dataclass
class ServiceConfig:
    host: str = "0.0.0.0"
    port: int = 8000
    model_path: str = "model.bin"
    request_timeout_ms: float = 120_000.0
    # Requests allowed to wait behind the one being simulated.
    max_queue_depth: int = 64
    health_always_on: bool = True
    intensity: float = 64.0
    window_ms: float = 100.0
    dt_ms: float = 1.0

    def __post_init__(self):
        if self.max_queue_depth < 0:
            raise ValueError("max_queue_depth must be >= 0")
        if not self.request_timeout_ms > 0:
            raise ValueError("request_timeout_ms must be positive")

    @classmethod
    def from_env(cls, **overrides) -> "ServiceConfig":
        env = os.environ
        cfg = {}
        if "MODEL_PATH" in env:
            cfg["model_path"] = env["MODEL_PATH"]
        if "PORT" in env:
            cfg["port"] = int(env["PORT"])
        if "QUEUE_DEPTH" in env:
            cfg["max_queue_depth"] = int(env["QUEUE_DEPTH"])
        if "REQUEST_TIMEOUT_MS" in env:
            cfg["request_timeout_ms"] = float(env["REQUEST_TIMEOUT_MS"])
        if "WINDOW_MS" in env:
            cfg["window_ms"] = float(env["WINDOW_MS"])
        cfg.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**cfg)
