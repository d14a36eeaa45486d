"""Closed-form threshold and bound evaluators.

The underlying statements are asymptotic; every unquantified constant is
pinned to an explicit finite-n surrogate here (documented per function and
echoed in report notes) so that a finite instance either qualifies or not
for a stated, visible reason.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ParameterError
from .model import EdgeProb, ModelParams

#: Explicit constant standing in for the O(.) of the edge-noise condition.
DEFAULT_SPARSITY_CONSTANT = 1.0

FINITE_N_NOTE = (
    "finite-n surrogate: asymptotic conditions evaluated with explicit "
    "constants (sparsity constant C and corollary margin are caller-visible "
    "choices, defaults C=1.0, margin=0.0)"
)


@dataclass(frozen=True)
class RegimeReport:
    """Verdicts of every closed-form condition for one parameter point.

    ``info_sum`` is the combined information rate
    ``n*p11 + (d/4) * log(1/(1-rho^2))`` compared against multiples of
    ``log(n)``; the booleans evaluate the achievability and impossibility
    inequalities at the given epsilon, a tightened impossibility variant,
    the edge-noise sparsity condition, and strict positive correlation.
    ``sparsity_ok`` is None when the check was not requested.
    """

    info_sum: float
    log_n: float
    achievable: bool
    impossible: bool
    corollary_impossible: bool
    sparsity_ok: bool | None
    positive_corr: bool


def positive_correlation(p: EdgeProb) -> bool:
    """Strictly positively correlated edges: p11*p00 > p10*p01."""
    return p.p11 * p.p00 > p.p10 * p.p01


def feature_information(d: int, rho: float) -> float:
    """Feature term ``(d/4) * log(1/(1-rho^2))``; +inf at rho=1 with d>=1."""
    if d == 0 or rho == 0.0:
        return 0.0
    if rho >= 1.0:
        return math.inf
    return (d / 4.0) * math.log(1.0 / (1.0 - rho * rho))


def regime_report(
    params: ModelParams,
    epsilon: float,
    *,
    sparsity_constant: float = DEFAULT_SPARSITY_CONSTANT,
    corollary_margin: float = 0.0,
    check_sparsity: bool = True,
) -> RegimeReport:
    """Evaluate every threshold predicate at one parameter point.

    The sparsity condition divides by p11, so requesting it with p11=0
    raises; pass ``check_sparsity=False`` for edge-free regimes.  The
    corollary margin operationalizes its unbounded slack term (default 0).
    """
    if epsilon <= 0.0:
        raise ParameterError(f"epsilon must be positive, got {epsilon}")
    n, p, d, rho = params.n, params.p, params.d, params.rho
    log_n = math.log(n)
    info_sum = n * p.p11 + feature_information(d, rho)

    achievable = info_sum >= (1.0 + epsilon) * log_n
    pos = positive_correlation(p)
    impossible = pos and info_sum <= (1.0 - epsilon) * log_n

    corollary = False
    if d >= 1 and rho > 0.0:
        noise_ok = (1.0 / (rho * rho) - 1.0) <= d / 40.0
        corollary = (
            pos
            and noise_ok
            and info_sum <= log_n - math.log(d) - corollary_margin
        )

    sparsity_ok: bool | None = None
    if check_sparsity:
        if p.p11 == 0.0:
            raise ParameterError(
                "sparsity condition divides by p11=0; pass check_sparsity=False "
                "for edge-free regimes"
            )
        lll = math.log(math.log(n)) if n > 3 else None
        if lll is None or lll <= 0.0:
            raise ParameterError(f"sparsity condition needs n > e**e region, got n={n}")
        ratio = p.p1_any * p.any_1 / p.p11
        sparsity_ok = ratio <= sparsity_constant * math.exp(-(lll**3))

    return RegimeReport(
        info_sum=info_sum,
        log_n=log_n,
        achievable=achievable,
        impossible=impossible,
        corollary_impossible=corollary,
        sparsity_ok=sparsity_ok,
        positive_corr=pos,
    )


def subsampling_probs(p: float, s: float) -> EdgeProb:
    """Edge probabilities when both graphs subsample one parent graph.

    A parent edge of probability ``p`` survives into each graph
    independently with rate ``s``: p11 = p*s^2, p10 = p01 = p*s*(1-s),
    and p00 the complement (computed as 1 minus the rest so the vector
    lies on the simplex exactly).
    """
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"p must be in [0, 1], got {p}")
    if not 0.0 <= s <= 1.0:
        raise ParameterError(f"s must be in [0, 1], got {s}")
    p11 = p * s * s
    p10 = p * s * (1.0 - s)
    p01 = p10
    p00 = 1.0 - p11 - p10 - p01
    return EdgeProb(p11=p11, p10=p10, p01=p01, p00=p00)


def expected_low_degree_bound(n: int, p: float, k: int) -> float:
    """Closed-form bound on the expected number of degree-<=k vertices in
    a density-p random graph: ``n * exp(-n*p + k*log(n*p) + 1)``."""
    np_ = n * p
    if np_ <= 0.0:
        raise ParameterError(f"n*p must be positive, got {np_}")
    return n * math.exp(-np_ + k * math.log(np_) + 1.0)


def xi_exponential_bound(n: int, p: EdgeProb, k: int, theta: float) -> float:
    """Per-unit exponent rate of the mismatch-degree tail bound:
    ``theta*k - exp(2*theta)*p11 - n*exp(6*theta)*p1_any*any_1``.

    A rate of at least ``2*log(n)`` certifies, for the given finite
    parameters, that the tail is negligible against the union bound over
    matchings.  Overflowing noise terms yield -inf, an honest "no
    certificate".
    """
    if theta <= 0.0:
        raise ParameterError(f"theta must be positive, got {theta}")

    def _term(log_coeff: float, weight: float) -> float:
        if weight <= 0.0:
            return 0.0
        try:
            return math.exp(log_coeff + math.log(weight))
        except OverflowError:
            return math.inf

    noise = _term(2.0 * theta, p.p11) + _term(6.0 * theta, n * p.p1_any * p.any_1)
    return theta * k - noise


def xi_certifies(n: int, p: EdgeProb, k: int, theta: float) -> bool:
    """Convenience predicate: rate >= 2*log(n)."""
    return xi_exponential_bound(n, p, k, theta) >= 2.0 * math.log(n)


def gaussian_threshold_d(n: int, rho: float, epsilon: float = 0.0) -> float:
    """Critical feature dimension ``4*log(n) / log(1/(1-rho^2))``.

    Exact feature-only matching is achievable above it and impossible below
    it (asymptotically); ``epsilon`` is accepted for callers who compare a
    supplied d against ``(1 +/- epsilon)`` times the returned value and does
    not change the returned threshold.
    """
    if int(n) != n or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n}")
    if not 0.0 < rho < 1.0:
        raise ParameterError(f"rho must be strictly inside (0, 1), got {rho}")
    if epsilon < 0.0:
        raise ParameterError(f"epsilon must be non-negative, got {epsilon}")
    return 4.0 * math.log(n) / math.log(1.0 / (1.0 - rho * rho))
