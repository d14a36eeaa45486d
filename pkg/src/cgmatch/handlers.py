"""Request handlers shared by the HTTP service and the CLI.

Each handler is a pure function from a request document to a response
document; the service adds HTTP wiring and the CLI adds files and exit
codes on top of the same functions.
"""

from __future__ import annotations

from .errors import CapacityError, ParameterError
from .experiments import run_sweep
from .matching import (
    KCoreConfig,
    MODE_BRUTE,
    choose_k,
    hybrid_match,
)
from .model import sample_pair
from .schemas import (
    CheckDoc,
    GenerateRequest,
    MatchRequest,
    MatchResponse,
    RecordDoc,
    RegimeRequest,
    RegimeResponse,
    SampleDoc,
    SweepRequest,
    SweepResponse,
    VerifyRequest,
    VerifyResponse,
)
from .thresholds import regime_report
from .verification import run_verification


def handle_generate(request: GenerateRequest) -> SampleDoc:
    params = request.to_params()
    sample = sample_pair(params, request.seed)
    return SampleDoc.from_sample(sample, include_pi_star=request.include_pi_star)


def handle_match(request: MatchRequest) -> MatchResponse:
    sample = request.sample.to_sample()
    if request.k == "auto":
        params = sample.params
        if params is None:
            raise ParameterError(
                "k='auto' needs the sample's generating parameters; "
                "pass an explicit k for parameter-free samples"
            )
        k = choose_k(params.n, params.p.p11)
    else:
        k = int(request.k)
    cfg = KCoreConfig(k=k, mode=request.mode, brute_force_limit=request.brute_force_limit)
    if cfg.mode == MODE_BRUTE and sample.n > cfg.brute_force_limit:
        raise CapacityError(
            f"brute-force matching is limited to n <= {cfg.brute_force_limit} "
            f"(sample has n={sample.n}); use mode='oracle'"
        )
    estimate = hybrid_match(sample, cfg)
    return MatchResponse(
        n=sample.n,
        k=k,
        mode=request.mode,
        pi_hat=[v + 1 for v in estimate.pi_hat],
        provenance=list(estimate.provenance),
    )


def handle_regime(request: RegimeRequest) -> RegimeResponse:
    params = request.to_params()
    report = regime_report(
        params,
        request.eps,
        sparsity_constant=request.sparsity_constant,
        corollary_margin=request.corollary_margin,
        check_sparsity=request.check_sparsity,
    )
    return RegimeResponse.from_report(params, request.eps, report)


def handle_sweep(request: SweepRequest, workers: int = 1) -> SweepResponse:
    cfg = request.to_config()
    records = run_sweep(cfg, workers=workers)
    return SweepResponse(
        records=[RecordDoc.from_record(r, request.include_timing) for r in records]
    )


def handle_verify(request: VerifyRequest) -> VerifyResponse:
    checks = run_verification(
        request.seed,
        posterior_instances=request.posterior_instances,
        mu_instances=request.mu_instances,
        mu_samples_per_instance=request.mu_samples_per_instance,
        mu_n=request.mu_n,
    )
    docs = [
        CheckDoc(
            name=c.name,
            trials=c.trials,
            violations=c.violations,
            max_abs_error=c.max_abs_error,
            passed=c.passed,
        )
        for c in checks
    ]
    return VerifyResponse(checks=docs, passed=all(c.passed for c in checks))
