"""HTTP facade over the core package.

Run with: ``uvicorn cgmatch.service:app``.  Every endpoint is a stateless
request/response wrapper around the same handlers the CLI uses; domain
errors map to HTTP 400 with a machine-readable error body.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__
from .errors import CgmatchError
from .handlers import (
    handle_generate,
    handle_match,
    handle_regime,
    handle_sweep,
    handle_verify,
)
from .schemas import (
    ErrorDoc,
    GenerateRequest,
    MatchRequest,
    MatchResponse,
    RegimeRequest,
    RegimeResponse,
    SampleDoc,
    SweepRequest,
    SweepResponse,
    VerifyRequest,
    VerifyResponse,
)

app = FastAPI(
    title="cgmatch",
    version=__version__,
    description=(
        "Correlated graph matching with Gaussian node features: sampling, "
        "two-step estimation, threshold reports, and Monte Carlo sweeps."
    ),
)


@app.exception_handler(CgmatchError)
async def _domain_error(_: Request, exc: CgmatchError) -> JSONResponse:
    doc = ErrorDoc(code=exc.code, message=str(exc), exit_code=exc.exit_code)
    return JSONResponse(status_code=400, content={"error": doc.model_dump()})


@app.get("/healthz")
def healthz() -> dict[str, str]:
    return {"status": "ok", "version": __version__}


@app.post("/generate", response_model=SampleDoc)
def generate(request: GenerateRequest) -> SampleDoc:
    return handle_generate(request)


@app.post("/match", response_model=MatchResponse)
def match(request: MatchRequest) -> MatchResponse:
    return handle_match(request)


@app.post("/regime", response_model=RegimeResponse)
def regime(request: RegimeRequest) -> RegimeResponse:
    return handle_regime(request)


@app.post("/sweep", response_model=SweepResponse)
def sweep(request: SweepRequest) -> SweepResponse:
    return handle_sweep(request)


@app.post("/verify", response_model=VerifyResponse)
def verify(request: VerifyRequest) -> VerifyResponse:
    return handle_verify(request)
