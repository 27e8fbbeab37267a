"""Order statistics, quantiles and moment summaries.

Quartiles use linear interpolation at rank h = (n - 1)p + 1, which is numpy's
``linear`` quantile method.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterable, Sequence, Union

import numpy as np
import structlog

from src.core.exceptions import DegenerateVariance, DomainError, EmptyInput, NonFiniteValue

logger = structlog.get_logger(__name__)

RealSequence = Union[Sequence[float], np.ndarray, Iterable[float]]


def _readonly(values: np.ndarray) -> np.ndarray:
    values.setflags(write=False)
    return values


@dataclass(frozen=True, eq=False)
class Sample:
    """Immutable sorted view of a univariate sample with cached statistics."""

    values: np.ndarray
    original: np.ndarray
    order: np.ndarray
    n: int
    mean: float
    sd: float
    q1: float
    median: float
    q3: float
    iqr: float
    _rank_of_index: np.ndarray = field(repr=False, compare=False)

    @property
    def minimum(self) -> float:
        return float(self.values[0])

    @property
    def maximum(self) -> float:
        return float(self.values[-1])

    def value_at(self, index: int) -> float:
        """Observation at an input-order index."""
        return float(self.original[index])

    def sorted_position(self, index: int) -> int:
        """Zero-based rank of the observation at an input-order index."""
        return int(self._rank_of_index[index])


def build_sample(raw: RealSequence) -> Sample:
    """Validate raw values and build a Sample.

    Raises:
        EmptyInput: no values supplied.
        NonFiniteValue: a NaN or infinite entry, reported by input index.
    """
    if not isinstance(raw, (np.ndarray, list, tuple)):
        raw = list(raw)
    original = np.array(raw, dtype=float).reshape(-1)
    if original.size == 0:
        raise EmptyInput()

    finite = np.isfinite(original)
    if not finite.all():
        index = int(np.flatnonzero(~finite)[0])
        raise NonFiniteValue(index, float(original[index]))

    order = np.argsort(original, kind="stable")
    values = original[order]
    rank_of_index = np.empty_like(order)
    rank_of_index[order] = np.arange(order.size)

    n = int(values.size)
    logger.debug("sample_built", n=n, ties=int(np.count_nonzero(np.diff(values) == 0)))
    mean = float(np.mean(values))
    sd = float(np.std(values, ddof=1)) if n > 1 else 0.0
    q1, median, q3 = (float(q) for q in np.quantile(values, [0.25, 0.5, 0.75], method="linear"))

    return Sample(
        values=_readonly(values),
        original=_readonly(original.copy()),
        order=_readonly(order),
        n=n,
        mean=mean,
        sd=sd,
        q1=q1,
        median=median,
        q3=q3,
        iqr=q3 - q1,
        _rank_of_index=_readonly(rank_of_index),
    )


def quantile(sample: Sample, p: float) -> float:
    """Linear-interpolation quantile at probability p in [0, 1]."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"Probability must lie in [0, 1]; got {p}", {"p": p})
    return float(np.quantile(sample.values, p, method="linear"))


def median(sample: Sample) -> float:
    """Sample median (quantile at p=0.5)."""
    return sample.median


def chauvenet_deviations(sample: Sample) -> np.ndarray:
    """Standardized deviations D_i = |X_i - mean| / sd in input order."""
    if sample.sd <= 0.0:
        raise DegenerateVariance("Deviations need a positive standard deviation")
    return np.abs(sample.original - sample.mean) / sample.sd


def sum_of_squares(sample: Sample) -> float:
    """Sum of squared deviations about the mean."""
    return float(np.sum((sample.values - sample.mean) ** 2))


def summary(sample: Sample) -> Dict[str, float]:
    """Descriptive summary used in reports."""
    return {
        "n": sample.n,
        "mean": sample.mean,
        "sd": sample.sd,
        "min": sample.minimum,
        "q1": sample.q1,
        "median": sample.median,
        "q3": sample.q3,
        "max": sample.maximum,
        "iqr": sample.iqr,
    }
