"""Fence coefficients and fence construction.

Quartile-based fences are LF = Q1 - k * IQR and UF = Q3 + k * IQR; the
Chauvenet interval and sigma clipping use mean +/- c * sd instead.
"""

import math
from typing import Dict, Iterable, List, Optional, Sequence

import structlog

from src.core.exceptions import (
    DegenerateIQR,
    DegenerateVariance,
    DomainError,
    InvalidParameters,
    OutsideValidityDomain,
)
from src.schemas.distribution import DistributionModel, NormalModel
from src.schemas.fences import (
    AsymptoticMethod,
    ChauvenetIntervalMethod,
    ChauvenetNonNormalMethod,
    ChauvenetTypeMethod,
    EmpiricalMethod,
    ExactRateMethod,
    FenceMethod,
    FencePair,
    SigmaClipMethod,
    ToleranceLimitMethod,
    TukeyMethod,
    in_approximation_grid,
)
from src.services.core_stats import Sample
from src.services.dist import normal_quantile, quantile_of

logger = structlog.get_logger(__name__)

# Rounded normal-theory constants: IQR ~ 1.35 sd and Q3 - mean ~ 0.675 sd.
CHAUVENET_IQR_RATIO = 1.35
CHAUVENET_OFFSET = 0.5

MIN_QUARTILE_N = 4

_ER_POLY = (4.01761, -2.35363, 0.64618, -0.07893, 0.00368)
_TL_POLY = (4.45171, -2.44501, 0.64990, -0.07851, 0.00365)
_AF_SMOOTHING = (1.0, 8.9764, -126.6262, 1531.7064, -10729.3439)
AF_SMOOTHING_CUTOFF = 2000


def chauvenet_threshold(n: int) -> float:
    """c_n, the upper 0.25/n standard normal quantile."""
    if n < 2:
        raise DomainError(f"Chauvenet threshold needs n >= 2; got {n}", {"n": n})
    return normal_quantile(1.0 - 0.25 / n)


def chauvenet_coefficient(n: int) -> float:
    """k_n = c_n / 1.35 - 0.5."""
    return chauvenet_threshold(n) / CHAUVENET_IQR_RATIO - CHAUVENET_OFFSET


def _log_polynomial_exp(n: int, coefficients: Sequence[float]) -> float:
    log_n = math.log(n)
    return math.exp(sum(c * log_n**power for power, c in enumerate(coefficients)))


def er_coefficient(n: int) -> float:
    """Exact some-outside rate coefficient (alpha = 0.05)."""
    if not in_approximation_grid(n):
        raise OutsideValidityDomain(n, "exact_rate")
    return _log_polynomial_exp(n, _ER_POLY)


def tl_coefficient(n: int) -> float:
    """Tolerance-limit coefficient (alpha = 0.05, gamma = 0.9)."""
    if not in_approximation_grid(n):
        raise OutsideValidityDomain(n, "tolerance_limit")
    return _log_polynomial_exp(n, _TL_POLY)


def af_smoothing(n: int) -> float:
    """Smoothing factor a_n of the asymptotic-fence coefficient."""
    if n >= AF_SMOOTHING_CUTOFF:
        return 1.0
    return sum(c * float(n) ** -power for power, c in enumerate(_AF_SMOOTHING))


def af_coefficient(n: int, alpha: float = 0.05) -> float:
    """Asymptotic-fence coefficient a_n [Phi^-1((1 - alpha/2)^(1/n)) - 0.6745] / 1.349."""
    if n < 2:
        raise DomainError(f"Asymptotic fences need n >= 2; got {n}", {"n": n})
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1); got {alpha}", {"alpha": alpha})
    limiting = (normal_quantile((1.0 - alpha / 2.0) ** (1.0 / n)) - 0.6745) / 1.349
    return af_smoothing(n) * limiting


def ec_coefficient(n: int) -> float:
    """Empirical coefficient 1.5 * (1 + 0.1 ln(n / 10))."""
    if n < 1:
        raise DomainError(f"Empirical coefficient needs n >= 1; got {n}", {"n": n})
    return 1.5 * (1.0 + 0.1 * math.log(n / 10.0))


def sigma_equivalent(k: float) -> float:
    """Sigma multiple matching a Tukey coefficient k under normality."""
    q3 = normal_quantile(0.75)
    return q3 + k * (2.0 * q3)


def chauvenet_crossing_n(target_k: float, n_max: int = 10**9) -> int:
    """Smallest n >= 2 with chauvenet_coefficient(n) >= target_k."""
    lo = 2
    if chauvenet_coefficient(lo) >= target_k:
        return lo
    hi = 4
    while chauvenet_coefficient(hi) < target_k:
        if hi >= n_max:
            raise DomainError(
                f"Coefficient {target_k} not reached for n <= {n_max}",
                {"target_k": target_k},
            )
        lo, hi = hi, min(hi * 2, n_max)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if chauvenet_coefficient(mid) >= target_k:
            hi = mid
        else:
            lo = mid
    return hi


def non_normal_coefficients(model: DistributionModel, n: int) -> tuple[float, float]:
    """Asymmetric coefficients (k', k'') from a model's quantile function."""
    if n < 2:
        raise DomainError(f"Non-normal fences need n >= 2; got {n}", {"n": n})
    tail = 0.25 / n
    lower_tail = quantile_of(model, tail)
    q1 = quantile_of(model, 0.25)
    q3 = quantile_of(model, 0.75)
    upper_tail = quantile_of(model, 1.0 - tail)
    spread = q3 - q1
    if spread <= 0.0:
        raise InvalidParameters(f"Model {model.describe()} has no interquartile spread")
    return (q1 - lower_tail) / spread, (upper_tail - q3) / spread


def quartile_coefficients(method: FenceMethod, n: int) -> tuple[float, float]:
    """(lower, upper) IQR multipliers for a quartile-based method."""
    if isinstance(method, TukeyMethod):
        return method.k, method.k
    if isinstance(method, ChauvenetTypeMethod):
        k = chauvenet_coefficient(n)
    elif isinstance(method, ExactRateMethod):
        k = er_coefficient(n)
    elif isinstance(method, ToleranceLimitMethod):
        k = tl_coefficient(n)
    elif isinstance(method, AsymptoticMethod):
        k = af_coefficient(n, method.alpha)
    elif isinstance(method, EmpiricalMethod):
        k = ec_coefficient(n)
    elif isinstance(method, ChauvenetNonNormalMethod):
        if method.model is None:
            raise InvalidParameters(
                "chauvenet_type_non_normal needs a fitted model; use detect() to fit one"
            )
        return non_normal_coefficients(method.model, n)
    else:
        raise InvalidParameters(f"{method.kind} is not a quartile-based method")
    return k, k


def fences_from_quartiles(q1: float, q3: float, n: int, method: FenceMethod) -> FencePair:
    """Fence pair from summary quartiles; the quartile form of compute_fences."""
    if n < MIN_QUARTILE_N:
        raise DegenerateIQR(
            f"Quartile-based fences need n >= {MIN_QUARTILE_N}; got {n}", {"n": n}
        )
    iqr = q3 - q1
    if not iqr > 0.0:
        raise DegenerateIQR("Interquartile range is zero", {"q1": q1, "q3": q3})
    k_lower, k_upper = quartile_coefficients(method, n)
    return FencePair(
        lower=q1 - k_lower * iqr,
        upper=q3 + k_upper * iqr,
        coefficient_lower=k_lower,
        coefficient_upper=k_upper,
        method=method,
    )


def _moment_interval(sample: Sample, c: float, method: FenceMethod) -> FencePair:
    if sample.n < 2 or sample.sd <= 0.0:
        raise DegenerateVariance(
            "Mean/sd interval needs n >= 2 and a positive standard deviation",
            {"n": sample.n, "sd": sample.sd},
        )
    return FencePair(
        lower=sample.mean - c * sample.sd,
        upper=sample.mean + c * sample.sd,
        coefficient_lower=c,
        coefficient_upper=c,
        method=method,
    )


def chauvenet_interval(sample: Sample) -> FencePair:
    """[mean - c_n sd, mean + c_n sd]."""
    if sample.n < 2:
        raise DegenerateVariance("Chauvenet interval needs n >= 2", {"n": sample.n})
    return _moment_interval(sample, chauvenet_threshold(sample.n), ChauvenetIntervalMethod())


def compute_fences(sample: Sample, method: FenceMethod) -> FencePair:
    """Dispatch a sample and method to the matching fence construction."""
    if isinstance(method, ChauvenetIntervalMethod):
        pair = chauvenet_interval(sample)
    elif isinstance(method, SigmaClipMethod):
        pair = _moment_interval(sample, method.c, method)
    else:
        pair = fences_from_quartiles(sample.q1, sample.q3, sample.n, method)
    logger.debug(
        "fences_computed",
        method=method.kind,
        n=sample.n,
        lower=pair.lower,
        upper=pair.upper,
    )
    return pair


def normal_reduction_gap(model: NormalModel, n: int) -> float:
    """Largest gap between the non-normal coefficients and k_n for a normal model."""
    k_lower, k_upper = non_normal_coefficients(model, n)
    k = chauvenet_coefficient(n)
    return max(abs(k_lower - k), abs(k_upper - k))


COEFFICIENT_KINDS = (
    "chauvenet_type",
    "exact_rate",
    "tolerance_limit",
    "asymptotic",
    "empirical",
    "tukey",
)


def coefficient_for(kind: str, n: int) -> Optional[float]:
    """Coefficient of a symmetric kind at n, or None outside its domain."""
    try:
        if kind == "chauvenet_type":
            return chauvenet_coefficient(n)
        if kind == "exact_rate":
            return er_coefficient(n)
        if kind == "tolerance_limit":
            return tl_coefficient(n)
        if kind == "asymptotic":
            return af_coefficient(n)
        if kind == "empirical":
            return ec_coefficient(n)
        if kind == "tukey":
            return 1.5
    except (OutsideValidityDomain, DomainError):
        return None
    raise InvalidParameters(
        f"Unknown coefficient kind: {kind}", {"kind": kind, "valid": list(COEFFICIENT_KINDS)}
    )


def coefficient_table(ns: Iterable[int], kinds: Sequence[str] = COEFFICIENT_KINDS) -> List[Dict]:
    """Rows {n, kind, coefficient}; coefficient is None outside a kind's domain."""
    return [
        {"n": int(n), "kind": kind, "coefficient": coefficient_for(kind, int(n))}
        for n in ns
        for kind in kinds
    ]
