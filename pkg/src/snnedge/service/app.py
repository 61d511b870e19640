"""HTTP front end: POST /predict, GET /healthz, GET /version."""
from __future__ import annotations

import asyncio
import logging
import resource
import time
from contextlib import asynccontextmanager
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..trainer.artifact import ModelArtifact, load_model
from .config import ServiceConfig
from .schemas import HealthStatus, PredictRequest, PredictResponse, VersionInfo
from .worker import InferenceWorker, QueueFullError

log = logging.getLogger("snnedge.service")


class ServiceState:
    def __init__(self, config: ServiceConfig):
        self.config = config
        self.started = time.monotonic()
        self.artifact: Optional[ModelArtifact] = None
        self.worker: Optional[InferenceWorker] = None

    def load(self) -> None:
        """Load the model once. A missing file leaves the service unready;
        an unreadable or unlabelled one is a startup error."""
        path = Path(self.config.model_path)
        if not path.exists():
            log.warning("model file %s not found; serving as unready", path)
            return
        t0 = time.perf_counter()
        artifact = load_model(path)
        if not artifact.model.labels_ready:
            raise RuntimeError(f"model {path} has no neuron labels")
        model = artifact.model
        nbytes = sum(
            a.nbytes
            for a in (
                model.syn_input_exc.weights,
                model.syn_exc_inh.weights,
                model.syn_inh_exc.weights,
            )
        )
        rss_mb = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024.0
        log.info(
            "loaded model %s (n_exc=%d, %.2f MiB weights) in %.1f ms; peak RSS %.1f MiB",
            artifact.checksum,
            model.n_exc,
            nbytes / 2**20,
            (time.perf_counter() - t0) * 1000.0,
            rss_mb,
        )
        self.artifact = artifact
        self.worker = InferenceWorker(
            model,
            max_queue_depth=self.config.max_queue_depth,
            intensity=self.config.intensity,
            window_ms=self.config.window_ms,
            dt_ms=self.config.dt_ms,
        )

    @property
    def model_version(self) -> Optional[str]:
        return None if self.artifact is None else self.artifact.checksum


def create_app(config: Optional[ServiceConfig] = None) -> FastAPI:
    config = config or ServiceConfig.from_env()
    state = ServiceState(config)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        state.load()
        yield
        if state.worker is not None:
            # Drain: let already-accepted simulations finish.
            await asyncio.to_thread(state.worker.shutdown, True)

    app = FastAPI(title="snnedge inference", version=__version__, lifespan=lifespan)
    app.state.svc = state

    @app.exception_handler(Exception)
    async def internal_error(request: Request, exc: Exception):
        log.exception("unhandled error on %s", request.url.path)
        return JSONResponse(status_code=500, content={"detail": f"internal error: {exc}"})

    @app.post("/predict", response_model=PredictResponse)
    async def predict(req: PredictRequest):
        worker = state.worker
        if worker is None:
            raise HTTPException(status_code=503, detail="model not loaded")
        try:
            fut = worker.submit(req.pixels, req.seed, req.intensity)
        except QueueFullError as exc:
            raise HTTPException(
                status_code=503,
                detail=str(exc),
                headers={"Retry-After": str(exc.retry_after_s)},
            )
        try:
            pred = await asyncio.wait_for(
                asyncio.wrap_future(fut), timeout=config.request_timeout_ms / 1000.0
            )
        except asyncio.TimeoutError:
            fut.cancel()
            raise HTTPException(status_code=504, detail="inference timed out")
        return PredictResponse(
            pred_all_activity=pred.pred_all_activity,
            pred_proportion=pred.pred_proportion,
            total_output_spikes=pred.total_output_spikes,
            inference_ms=pred.inference_ms,
            model_version=state.model_version,
            no_activity=pred.no_activity,
        )

    @app.get("/healthz", response_model=HealthStatus)
    async def healthz():
        loaded = state.worker is not None
        return HealthStatus(
            status="ok" if loaded else "unready",
            model_loaded=loaded,
            queue_depth=state.worker.queue_depth if loaded else 0,
            uptime_s=time.monotonic() - state.started,
        )

    @app.get("/version", response_model=VersionInfo)
    async def version():
        model = None if state.artifact is None else state.artifact.model
        return VersionInfo(
            service=__version__,
            model_version=state.model_version,
            n_exc=None if model is None else model.n_exc,
            window_ms=config.window_ms,
            intensity=config.intensity,
        )

    return app


def serve(config: ServiceConfig, log_level: str = "info") -> None:
    """Run the service until SIGINT/SIGTERM. Exits nonzero if startup fails."""
    import uvicorn

    logging.basicConfig(level=log_level.upper(), format="%(asctime)s %(levelname)s %(name)s %(message)s")
    uvicorn.run(
        create_app(config),
        host=config.host,
        port=config.port,
        log_level=log_level,
        timeout_graceful_shutdown=max(1, int(config.request_timeout_ms / 1000)),
    )
