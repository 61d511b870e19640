from .app import create_app, serve
from .config import ServiceConfig
from .schemas import HealthStatus, PredictRequest, PredictResponse, VersionInfo
from .worker import InferenceWorker, QueueFullError

__all__ = [
    "HealthStatus",
    "InferenceWorker",
    "PredictRequest",
    "PredictResponse",
    "QueueFullError",
    "ServiceConfig",
    "VersionInfo",
    "create_app",
    "serve",
]
