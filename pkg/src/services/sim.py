"""Monte Carlo estimation of outlier-labeling rates.

Every replicate draws from its own PCG64 stream seeded by
SeedSequence([seed, replicate_index]), so aggregates do not depend on the
order or process in which replicates run.

Normal variates come from the inverse normal CDF applied to open-interval
uniforms; chi-square and gamma from numpy's standard_gamma; Student-t as
Z / sqrt(chi2 / nu).
"""

import time
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence, Tuple

import numpy as np
import structlog
from pydantic import ValidationError
from scipy import special

from src.core.exceptions import InvalidConfig
from src.core.settings import get_settings
from src.schemas.fences import FenceMethod
from src.schemas.simulation import (
    BetaGenerator,
    ChiSquareGenerator,
    ExponentialGenerator,
    GammaGenerator,
    GeneratorSpec,
    LogNormalGenerator,
    MethodSummary,
    NormalGenerator,
    OutsideRate,
    SimConfig,
    SimResult,
    StudentTGenerator,
)
from src.services.core_stats import build_sample
from src.services.detect import detect
from src.utils.tables import aligned_table

logger = structlog.get_logger(__name__)

_UNIT = 2.0**-53


def make_sim_config(**data: object) -> SimConfig:
    """Validate a simulation configuration, mapping failures to InvalidConfig."""
    try:
        return SimConfig.model_validate(data)
    except ValidationError as e:
        raise InvalidConfig(
            "Invalid simulation configuration",
            {"errors": e.errors(include_url=False, include_context=False)},
        ) from e


def replicate_rng(seed: int, replicate: int) -> np.random.Generator:
    """Independent PCG64 stream for one replicate of a seeded run."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, replicate])))


def _open_uniforms(rng: np.random.Generator, size: int) -> np.ndarray:
    # (k + 0.5) / 2^53 never hits 0 or 1
    return (rng.integers(0, 2**53, size=size, dtype=np.int64) + 0.5) * _UNIT


def _standard_normals(rng: np.random.Generator, size: int) -> np.ndarray:
    return special.ndtri(_open_uniforms(rng, size))


def draw(generator: GeneratorSpec, size: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``size`` genuine observations from a generator."""
    if isinstance(generator, NormalGenerator):
        return generator.mu + generator.sigma * _standard_normals(rng, size)
    if isinstance(generator, ChiSquareGenerator):
        return 2.0 * rng.standard_gamma(generator.dof / 2.0, size=size)
    if isinstance(generator, StudentTGenerator):
        z = _standard_normals(rng, size)
        chi2 = 2.0 * rng.standard_gamma(generator.dof / 2.0, size=size)
        return z / np.sqrt(chi2 / generator.dof)
    if isinstance(generator, GammaGenerator):
        return generator.scale * rng.standard_gamma(generator.shape, size=size)
    if isinstance(generator, BetaGenerator):
        return rng.beta(generator.a, generator.b, size=size)
    if isinstance(generator, ExponentialGenerator):
        return rng.exponential(generator.scale, size=size)
    if isinstance(generator, LogNormalGenerator):
        return np.exp(generator.mu + generator.sigma * _standard_normals(rng, size))
    raise InvalidConfig(f"Unsupported generator: {generator!r}")


def replicate_data(config: SimConfig, replicate: int) -> Tuple[np.ndarray, np.ndarray]:
    """Genuine draws followed by contamination, plus the ground-truth flags."""
    rng = replicate_rng(config.seed, replicate)
    genuine = draw(config.generator, config.n_genuine, rng)
    extra = [np.full(c.count, c.value, dtype=float) for c in config.contamination]
    values = np.concatenate([genuine, *extra]) if extra else genuine
    flags = np.zeros(config.n, dtype=bool)
    flags[config.n_genuine :] = True
    return values, flags


def _run_replicates(config: SimConfig, replicates: Sequence[int]) -> np.ndarray:
    """Counts array of shape (len(replicates), len(methods), 4).

    The last axis holds flagged, false positive, true positive and a fallback
    indicator for each method.
    """
    counts = np.zeros((len(replicates), len(config.methods), 4), dtype=np.int64)
    for row, replicate in enumerate(replicates):
        values, flags = replicate_data(config, replicate)
        sample = build_sample(values)
        for col, method in enumerate(config.methods):
            report = detect(sample, method, contamination=flags)
            counts[row, col] = (
                report.n_flagged,
                report.false_positives,
                report.true_positives,
                1 if report.warnings else 0,
            )
    return counts


def _run_chunk(payload: Tuple[str, List[int]]) -> np.ndarray:
    config_json, replicates = payload
    return _run_replicates(SimConfig.model_validate_json(config_json), replicates)


def _chunks(total: int, parts: int) -> List[List[int]]:
    bounds = np.linspace(0, total, parts + 1).astype(int)
    return [list(range(lo, hi)) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]


def _mean_se(values: np.ndarray) -> Tuple[float, float]:
    mean = float(np.mean(values))
    if values.size < 2:
        return mean, 0.0
    return mean, float(np.std(values, ddof=1) / np.sqrt(values.size))


def _summarize(method: FenceMethod, counts: np.ndarray, n_genuine: int) -> MethodSummary:
    flagged, false_pos, true_pos, fallback = (counts[:, k] for k in range(4))
    mean_flagged, se_flagged = _mean_se(flagged)
    mean_fp, se_fp = _mean_se(false_pos)
    mean_tp, se_tp = _mean_se(true_pos)
    return MethodSummary(
        method=method.label,
        mean_flagged=mean_flagged,
        se_flagged=se_flagged,
        mean_false_positives=mean_fp,
        se_false_positives=se_fp,
        mean_true_positives=mean_tp,
        se_true_positives=se_tp,
        outside_rate=mean_fp / n_genuine,
        outside_rate_se=se_fp / n_genuine,
        fallback_replicates=int(fallback.sum()),
        flagged_counts=flagged.tolist(),
        false_positive_counts=false_pos.tolist(),
        true_positive_counts=true_pos.tolist(),
    )


def run_simulation(config: SimConfig, max_workers: Optional[int] = None) -> SimResult:
    """Run every replicate and aggregate per-method counts.

    With more than one worker the replicates are split into contiguous chunks
    over a process pool; chunks are reassembled in replicate order.
    """
    workers = max_workers if max_workers is not None else get_settings().max_workers
    workers = max(1, min(workers, config.replicates))
    logger.info(
        "simulation_started",
        generator=config.generator.family,
        n=config.n,
        replicates=config.replicates,
        methods=[m.label for m in config.methods],
        workers=workers,
    )
    started = time.perf_counter()

    if workers == 1:
        counts = _run_replicates(config, range(config.replicates))
    else:
        config_json = config.model_dump_json()
        payloads = [(config_json, chunk) for chunk in _chunks(config.replicates, workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            counts = np.concatenate(list(pool.map(_run_chunk, payloads)), axis=0)

    summaries = [
        _summarize(method, counts[:, col, :], config.n_genuine)
        for col, method in enumerate(config.methods)
    ]
    elapsed = time.perf_counter() - started
    logger.info("simulation_finished", replicates=config.replicates, elapsed=round(elapsed, 3))
    return SimResult(config=config, methods=summaries, elapsed_seconds=elapsed)


def estimate_outside_rate(
    generator: GeneratorSpec,
    n: int,
    method: FenceMethod,
    replicates: int,
    seed: int,
) -> OutsideRate:
    """Per-observation outside rate on clean data with its standard error."""
    config = make_sim_config(
        generator=generator, n=n, replicates=replicates, seed=seed, methods=[method]
    )
    summary = run_simulation(config).methods[0]
    return OutsideRate(
        rate=summary.outside_rate,
        standard_error=summary.outside_rate_se,
        replicates=replicates,
    )


_TABLE_COLUMNS = (
    ("method", "method"),
    ("flagged", "mean_flagged"),
    ("se", "se_flagged"),
    ("false_pos", "mean_false_positives"),
    ("true_pos", "mean_true_positives"),
    ("rate", "outside_rate"),
    ("rate_se", "outside_rate_se"),
)


def result_table(result: SimResult, precision: int = 6) -> str:
    """Aligned-column text table, one row per method."""
    headers = [header for header, _ in _TABLE_COLUMNS]
    rows = [[getattr(summary, attr) for _, attr in _TABLE_COLUMNS] for summary in result.methods]
    return aligned_table(headers, rows, precision, left=["method"])
