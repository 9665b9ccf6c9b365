"""Request/response models for the HTTP service."""

from __future__ import annotations

from pydantic import BaseModel, Field


class ConstructRequest(BaseModel):
    n: int
    design_snr_db: float = 0.0


class ProfileResponse(BaseModel):
    n: int
    design_snr_db: float
    means: list[float]
    b: list[float]
    rank: list[int]


class PatternModel(BaseModel):
    n: int
    n_short: int
    method: str
    indices: list[int]


class PatternRequest(BaseModel):
    n: int
    n_short: int
    method: str = "pd"
    design_snr_db: float = 0.0


class ValidateRequest(BaseModel):
    pattern: PatternModel


class ValidateResponse(BaseModel):
    ok: bool
    violations: list[tuple[int, int]]


class SpectrumRequest(BaseModel):
    n: int
    n_short: int | None = None
    method: str = "pd"
    design_snr_db: float = 0.0
    pattern: PatternModel | None = None


class CompareRequest(BaseModel):
    n: int
    n_short: int
    design_snr_db: float = 0.0
    eval_x: float = 0.5


class StopModel(BaseModel):
    min_frame_errors: int = 100
    max_frames: int = 1_000_000


class SimulateRequest(BaseModel):
    n: int
    n_short: int
    k: int
    method: str = "pd"
    design_snr_db: float = 0.0
    ebn0_db: list[float]
    seed: int = 0
    stop: StopModel = Field(default_factory=StopModel)
    pattern: PatternModel | None = None  # for method == "custom"


class PointModel(BaseModel):
    ebn0_db: float
    frames: int
    bit_errors: int
    frame_errors: int
    ber: float
    fer: float
    ci95_ber: float
    seed: int


class CodeModel(BaseModel):
    n: int
    n_short: int
    k: int
    design_snr_db: float
    method: str
    pattern: list[int]
    info_set: list[int]
    frozen_set: list[int]


class SimulateResponse(BaseModel):
    code: CodeModel
    seed: int
    points: list[PointModel]


class HealthResponse(BaseModel):
    name: str
    version: str
