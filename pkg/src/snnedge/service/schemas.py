from typing import Optional

from pydantic import BaseModel, Field, field_validator

PIXELS = 784


class PredictRequest(BaseModel):
    pixels: list[float] = Field(..., description="784 intensities in [0, 255], row-major 28x28")
    seed: Optional[int] = None
    intensity: Optional[float] = Field(default=None, gt=0)

    @field_validator("pixels")
    @classmethod
    def _check_pixels(cls, v):
        if len(v) != PIXELS:
            raise ValueError(f"pixels must contain exactly {PIXELS} values, got {len(v)}")
        if min(v) < 0 or max(v) > 255:
            raise ValueError("pixel values must lie in [0, 255]")
        return v


class PredictResponse(BaseModel):
    pred_all_activity: int = Field(..., ge=0, le=9)
    pred_proportion: int = Field(..., ge=0, le=9)
    total_output_spikes: int
    inference_ms: float = Field(..., ge=0)
    model_version: str
    no_activity: bool


class HealthStatus(BaseModel):
    status: str
    model_loaded: bool
    queue_depth: int
    uptime_s: float


class VersionInfo(BaseModel):
    service: str
    model_version: Optional[str]
    n_exc: Optional[int]
    window_ms: float
    intensity: float
