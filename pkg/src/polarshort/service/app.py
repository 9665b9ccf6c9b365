"""FastAPI service wrapping the core toolkit.

The handler functions are plain callables over the schema models; the HTTP
routes and the CLI both delegate to them, so in-process and remote use give
identical results.
"""

from __future__ import annotations

import json
from fractions import Fraction

from fastapi import FastAPI

from .. import __version__
from ..construction import GaParams, build_profile
from ..channel import StopRule, run_sweep
from ..shortening import (
    ShortenPattern,
    build_code_spec,
    cw_pattern,
    pd_pattern,
    rqup_pattern,
    validate_pattern,
)
from ..spectrum import (
    build_spectrum,
    compare_methods,
    d_sd,
    lambda_sd,
    spectrum_report_json,
)
from .schemas import (
    CodeModel,
    CompareRequest,
    ConstructRequest,
    HealthResponse,
    PatternModel,
    PatternRequest,
    PointModel,
    ProfileResponse,
    SimulateRequest,
    SimulateResponse,
    SpectrumRequest,
    ValidateRequest,
    ValidateResponse,
)


class RequestError(ValueError):
    """Invalid configuration; maps to HTTP 400 / CLI exit 2."""


def _profile(n: int, design_snr_db: float):
    try:
        return build_profile(n, GaParams(design_snr_db=design_snr_db))
    except ValueError as exc:
        raise RequestError(str(exc)) from exc


def _pattern_from_model(model: PatternModel) -> ShortenPattern:
    try:
        pat = ShortenPattern(
            n=model.n, indices=tuple(model.indices), method=model.method.upper()
        )
    except ValueError as exc:
        raise RequestError(str(exc)) from exc
    if pat.n_short != model.n_short:
        raise RequestError(
            f"n_short field ({model.n_short}) disagrees with indices ({pat.n_short})"
        )
    return pat


def handle_construct(req: ConstructRequest) -> ProfileResponse:
    profile = _profile(req.n, req.design_snr_db)
    return ProfileResponse(
        n=profile.n,
        design_snr_db=profile.design_snr_db,
        means=profile.means.tolist(),
        b=profile.b.tolist(),
        rank=profile.rank.tolist(),
    )


def handle_pattern(req: PatternRequest) -> PatternModel:
    method = req.method.upper()
    try:
        if method == "PD":
            pat = pd_pattern(_profile(req.n, req.design_snr_db), req.n_short)
        elif method == "CW":
            pat = cw_pattern(req.n, req.n_short)
        elif method == "RQUP":
            pat = rqup_pattern(req.n, req.n_short)
        else:
            raise RequestError(f"unknown pattern method {req.method!r}")
    except ValueError as exc:
        raise RequestError(str(exc)) from exc
    return PatternModel(
        n=pat.n, n_short=pat.n_short, method=pat.method, indices=list(pat.indices)
    )


def handle_validate(req: ValidateRequest) -> ValidateResponse:
    result = validate_pattern(_pattern_from_model(req.pattern))
    return ValidateResponse(ok=result.ok, violations=result.violations)


def handle_spectrum(req: SpectrumRequest) -> dict:
    levels = req.n.bit_length() - 1
    if req.n < 1 or req.n & (req.n - 1):
        raise RequestError(f"n must be a power of two, got {req.n}")
    if req.pattern is not None:
        pat = _pattern_from_model(req.pattern)
    elif req.n_short is None or req.n_short == req.n:
        pat = None
    else:
        model = handle_pattern(
            PatternRequest(
                n=req.n,
                n_short=req.n_short,
                method=req.method,
                design_snr_db=req.design_snr_db,
            )
        )
        pat = _pattern_from_model(model)
    spec = build_spectrum(levels, pat)
    lam, d = lambda_sd(spec), d_sd(spec)
    return {
        "n": req.n,
        "n_short": spec.survivors,
        "pattern": list(pat.indices) if pat else [],
        "method": pat.method if pat else "NONE",
        "zero_coeffs": list(spec.zero_coeffs),
        "one_coeffs": list(spec.one_coeffs),
        "lambda": str(lam),
        "lambda_decimal": f"{float(lam):.4f}",
        "d": str(d),
        "d_decimal": f"{float(d):.4f}",
    }


def handle_compare(req: CompareRequest) -> dict:
    levels = req.n.bit_length() - 1
    profile = _profile(req.n, req.design_snr_db)
    try:
        report = compare_methods(
            levels, req.n_short, profile, Fraction(req.eval_x).limit_denominator(10**9)
        )
    except ValueError as exc:
        raise RequestError(str(exc)) from exc
    return json.loads(spectrum_report_json(report))


def handle_simulate(req: SimulateRequest) -> SimulateResponse:
    profile = _profile(req.n, req.design_snr_db)
    method = req.method.upper()
    custom = None
    if method == "CUSTOM":
        if req.pattern is None:
            raise RequestError("custom simulation requires a pattern")
        custom = _pattern_from_model(req.pattern)
    if not req.ebn0_db:
        raise RequestError("ebn0_db list must be non-empty")
    try:
        spec = build_code_spec(profile, req.n_short, req.k, method, custom)
        stop = StopRule(
            min_frame_errors=req.stop.min_frame_errors, max_frames=req.stop.max_frames
        )
        result = run_sweep(spec, list(req.ebn0_db), stop, seed=req.seed)
    except ValueError as exc:
        raise RequestError(str(exc)) from exc
    return SimulateResponse(
        code=CodeModel(
            n=spec.n,
            n_short=spec.n_short,
            k=spec.k,
            design_snr_db=spec.design_snr_db,
            method=spec.pattern.method,
            pattern=list(spec.pattern.indices),
            info_set=list(spec.info_set),
            frozen_set=list(spec.frozen_set),
        ),
        seed=result.seed,
        points=[
            PointModel(
                ebn0_db=p.ebn0_db,
                frames=p.frames,
                bit_errors=p.bit_errors,
                frame_errors=p.frame_errors,
                ber=p.ber,
                fer=p.fer,
                ci95_ber=p.ci95_ber,
                seed=p.seed,
            )
            for p in result.points
        ],
    )


def create_app() -> FastAPI:
    app = FastAPI(title="polarshort", version=__version__)

    @app.exception_handler(RequestError)
    async def _bad_request(_, exc: RequestError):
        from fastapi.responses import JSONResponse

        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.get("/health", response_model=HealthResponse)
    def health():
        return HealthResponse(name="polarshort", version=__version__)

    @app.post("/construct", response_model=ProfileResponse)
    def construct(req: ConstructRequest):
        return handle_construct(req)

    @app.post("/pattern", response_model=PatternModel)
    def pattern(req: PatternRequest):
        return handle_pattern(req)

    @app.post("/pattern/validate", response_model=ValidateResponse)
    def validate(req: ValidateRequest):
        return handle_validate(req)

    @app.post("/spectrum")
    def spectrum(req: SpectrumRequest):
        return handle_spectrum(req)

    @app.post("/compare")
    def compare(req: CompareRequest):
        return handle_compare(req)

    @app.post("/simulate", response_model=SimulateResponse)
    def simulate(req: SimulateRequest):
        return handle_simulate(req)

    return app


app = create_app()
