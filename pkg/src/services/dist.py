"""Distribution functions, quantile inversion and method-of-moments fits.

Gamma and chi-square CDFs use the regularized incomplete gamma function; the
Student-t CDF uses the regularized incomplete beta function. Quantiles start
from scipy's inverse functions and are then pinned down by bracketed root
finding with a Newton polish, so every returned quantile satisfies
|cdf(x) - p| <= QUANTILE_TOLERANCE.
"""

import math
from typing import Any, Callable, List, Tuple

import numpy as np
import structlog
from pydantic import TypeAdapter, ValidationError
from scipy import optimize, special

from src.core.exceptions import (
    ConvergenceFailure,
    DegenerateVariance,
    DomainError,
    InvalidParameters,
    NonPositiveData,
    NonPositiveMean,
    VarianceAtMostOne,
)
from src.schemas.distribution import (
    ChiSquareModel,
    DistributionModel,
    FamilyName,
    GammaModel,
    NormalModel,
    StudentTModel,
)
from src.services.core_stats import Sample, sum_of_squares

logger = structlog.get_logger(__name__)

QUANTILE_TOLERANCE = 1e-10
_MAX_BRACKET_STEPS = 200
_NEWTON_STEPS = 8

_model_adapter: TypeAdapter = TypeAdapter(DistributionModel)


def make_model(family: str, **params: Any) -> DistributionModel:
    """Build a validated model, mapping validation failures to InvalidParameters."""
    try:
        return _model_adapter.validate_python({"family": family, **params})
    except ValidationError as e:
        raise InvalidParameters(
            f"Invalid parameters for {family}: {params}",
            {"family": family, "errors": e.errors(include_url=False)},
        ) from e


def _check_probability(p: float) -> float:
    p = float(p)
    if not 0.0 < p < 1.0:
        raise DomainError(f"Probability must lie strictly inside (0, 1); got {p}", {"p": p})
    return p


def normal_quantile(p: float) -> float:
    """Standard normal inverse CDF."""
    return float(special.ndtri(_check_probability(p)))


def normal_cdf(x: float) -> float:
    """Standard normal distribution function."""
    return float(special.ndtr(x))


def cdf(model: DistributionModel, x: float) -> float:
    """Cumulative distribution function of a model."""
    if isinstance(model, NormalModel):
        return float(special.ndtr((x - model.mu) / model.sigma))
    if isinstance(model, ChiSquareModel):
        return cdf(model.as_gamma(), x)
    if isinstance(model, GammaModel):
        if x <= 0.0:
            return 0.0
        return float(special.gammainc(model.shape, x / model.scale))
    if isinstance(model, StudentTModel):
        nu = model.dof
        tail = 0.5 * float(special.betainc(nu / 2.0, 0.5, nu / (nu + x * x)))
        return 1.0 - tail if x > 0.0 else tail
    raise InvalidParameters(f"Unsupported model: {model!r}")


def pdf(model: DistributionModel, x: float) -> float:
    """Probability density function of a model."""
    if isinstance(model, NormalModel):
        z = (x - model.mu) / model.sigma
        return math.exp(-0.5 * z * z) / (model.sigma * math.sqrt(2.0 * math.pi))
    if isinstance(model, ChiSquareModel):
        return pdf(model.as_gamma(), x)
    if isinstance(model, GammaModel):
        if x <= 0.0:
            return 0.0
        a, s = model.shape, model.scale
        return math.exp((a - 1.0) * math.log(x) - x / s - special.gammaln(a) - a * math.log(s))
    if isinstance(model, StudentTModel):
        nu = model.dof
        log_density = (
            special.gammaln((nu + 1.0) / 2.0)
            - special.gammaln(nu / 2.0)
            - 0.5 * math.log(nu * math.pi)
            - (nu + 1.0) / 2.0 * math.log1p(x * x / nu)
        )
        return math.exp(log_density)
    raise InvalidParameters(f"Unsupported model: {model!r}")


def _initial_guess(model: DistributionModel, p: float) -> float:
    if isinstance(model, ChiSquareModel):
        return _initial_guess(model.as_gamma(), p)
    if isinstance(model, GammaModel):
        return model.scale * float(special.gammaincinv(model.shape, p))
    if isinstance(model, StudentTModel):
        return float(special.stdtrit(model.dof, p))
    raise InvalidParameters(f"Unsupported model: {model!r}")


def _bracket(f: Callable[[float], float], guess: float, positive: bool) -> Tuple[float, float]:
    """Expand an interval around ``guess`` until f changes sign."""
    if not math.isfinite(guess):
        guess = 1.0 if positive else 0.0
    step = max(abs(guess), 1.0) * 0.1
    lo, hi = guess - step, guess + step
    if positive:
        lo = max(lo, 0.0)
    for _ in range(_MAX_BRACKET_STEPS):
        f_lo, f_hi = f(lo), f(hi)
        if f_lo <= 0.0 <= f_hi:
            return lo, hi
        step *= 2.0
        if f_lo > 0.0:
            lo = max(lo - step, 0.0) if positive else lo - step
        if f_hi < 0.0:
            hi = hi + step
    raise ConvergenceFailure("Could not bracket the quantile", {"guess": guess})


def quantile_of(model: DistributionModel, p: float) -> float:
    """Inverse CDF of a model at probability p.

    Raises:
        DomainError: p outside (0, 1).
        ConvergenceFailure: the refined root misses the probability tolerance.
    """
    p = _check_probability(p)
    if isinstance(model, NormalModel):
        return model.mu + model.sigma * float(special.ndtri(p))

    positive = isinstance(model, (GammaModel, ChiSquareModel))

    def f(x: float) -> float:
        return cdf(model, x) - p

    guess = _initial_guess(model, p)
    if math.isfinite(guess) and abs(f(guess)) <= QUANTILE_TOLERANCE * 1e-2:
        return guess

    lo, hi = _bracket(f, guess, positive)
    if f(lo) == 0.0:
        return lo
    if f(hi) == 0.0:
        return hi
    x = optimize.brentq(f, lo, hi, xtol=1e-300, rtol=4.0 * np.finfo(float).eps, maxiter=500)

    for _ in range(_NEWTON_STEPS):
        residual = f(x)
        if abs(residual) <= QUANTILE_TOLERANCE * 1e-2:
            break
        density = pdf(model, x)
        if density <= 0.0:
            break
        candidate = x - residual / density
        if not lo <= candidate <= hi:
            break
        x = candidate

    if abs(f(x)) > QUANTILE_TOLERANCE:
        raise ConvergenceFailure(
            f"Quantile inversion for {model.describe()} at p={p} did not converge",
            {"p": p, "x": x, "residual": f(x)},
        )
    return x


# Method-of-moments fits


def fit_normal(sample: Sample) -> NormalModel:
    """Normal model with the sample mean and sd."""
    if sample.sd <= 0.0:
        raise DegenerateVariance("Normal fit needs a positive standard deviation")
    return NormalModel(mu=sample.mean, sigma=sample.sd)


def fit_gamma_mom(sample: Sample) -> GammaModel:
    """Gamma(shape, scale) moment fit with divisor-n variance.

    shape = n * mean^2 / SS and scale = SS / (n * mean), SS the sum of squared
    deviations.
    """
    if sample.minimum <= 0.0:
        raise NonPositiveData(
            "Gamma fit requires strictly positive observations",
            {"minimum": sample.minimum},
        )
    ss = sum_of_squares(sample)
    if sample.n < 2 or ss <= 0.0:
        raise DegenerateVariance("Gamma fit requires a positive sample variance")
    shape = sample.n * sample.mean**2 / ss
    scale = ss / (sample.n * sample.mean)
    return GammaModel(shape=shape, scale=scale)


def fit_chi_square_mom(sample: Sample) -> ChiSquareModel:
    """Chi-square fit with dof equal to the sample mean."""
    if sample.mean <= 0.0:
        raise NonPositiveMean(
            "Chi-square fit requires a positive sample mean", {"mean": sample.mean}
        )
    return ChiSquareModel(dof=sample.mean)


def t_dof_from_variance(variance: float) -> float:
    """Solve nu / (nu - 2) = variance for nu."""
    if variance <= 1.0:
        raise VarianceAtMostOne(
            "Student-t moment fit needs a sample variance above 1",
            {"variance": variance},
        )
    return 2.0 * variance / (variance - 1.0)


def fit_t_mom(sample: Sample) -> StudentTModel:
    """Student-t fit with nu = 2 S^2 / (S^2 - 1)."""
    if sample.n < 2:
        raise DegenerateVariance("Student-t fit needs at least two observations")
    return StudentTModel(dof=t_dof_from_variance(sample.sd**2))


def fit_model(sample: Sample, family: FamilyName) -> Tuple[DistributionModel, List[str]]:
    """Fit ``family`` by the method of moments.

    Returns the model and any warnings. An infeasible Student-t fit falls back
    to normal(mean, sd).
    """
    warnings: List[str] = []
    if family == "normal":
        return fit_normal(sample), warnings
    if family == "gamma":
        return fit_gamma_mom(sample), warnings
    if family == "chi_square":
        return fit_chi_square_mom(sample), warnings
    if family == "student_t":
        try:
            return fit_t_mom(sample), warnings
        except VarianceAtMostOne as e:
            logger.warning(
                "t_fit_fallback_to_normal", variance=sample.sd**2, reason=e.code
            )
            warnings.append(
                f"student_t moment fit infeasible (S^2={sample.sd**2:.6g} <= 1); "
                "fell back to normal(mean, sd)"
            )
            return fit_normal(sample), warnings
    raise InvalidParameters(f"Unknown distribution family: {family}", {"family": family})
