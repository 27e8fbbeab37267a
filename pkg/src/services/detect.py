"""Outlier labeling against fence pairs.

Fences are closed: an observation equal to a fence is an inlier.
"""

import json
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from src.core.exceptions import InconsistentOuter, InvalidParameters, InvertedFences
from src.schemas.distribution import DistributionModel
from src.schemas.fences import ChauvenetNonNormalMethod, FenceMethod, FencePair
from src.services.core_stats import Sample, summary
from src.services.dist import fit_model
from src.services.fences import compute_fences

logger = structlog.get_logger(__name__)


class Label(str, Enum):
    """Per-observation outlier label."""

    INLIER = "inlier"
    OUTSIDE = "outside"
    FAR_OUT = "far_out"


_LABELS = (Label.INLIER, Label.OUTSIDE, Label.FAR_OUT)
INLIER, OUTSIDE, FAR_OUT = 0, 1, 2


@dataclass(frozen=True, eq=False)
class DetectionReport:
    """Labels for every observation in input order plus whiskers and counts."""

    codes: np.ndarray
    values: np.ndarray
    fence: FencePair
    outer: Optional[FencePair]
    whisker_low: float
    whisker_high: float
    n_flagged: int
    n_low: int
    n_high: int
    stats: Dict[str, float]
    contamination: Optional[np.ndarray] = None
    warnings: Tuple[str, ...] = ()

    @property
    def n(self) -> int:
        return int(self.codes.size)

    @property
    def labels(self) -> List[Label]:
        return [_LABELS[c] for c in self.codes]

    @property
    def flagged_indices(self) -> List[int]:
        return [int(i) for i in np.flatnonzero(self.codes != INLIER)]

    @property
    def flagged_values(self) -> List[float]:
        return [float(v) for v in self.values[self.codes != INLIER]]

    @property
    def true_positives(self) -> Optional[int]:
        if self.contamination is None:
            return None
        return int(np.count_nonzero((self.codes != INLIER) & self.contamination))

    @property
    def false_positives(self) -> Optional[int]:
        if self.contamination is None:
            return None
        return int(np.count_nonzero((self.codes != INLIER) & ~self.contamination))


def label_codes(values: np.ndarray, inner: FencePair, outer: Optional[FencePair] = None) -> np.ndarray:
    """Vectorized label codes: 0 inlier, 1 outside, 2 far out."""
    codes = ((values < inner.lower) | (values > inner.upper)).astype(np.int8)
    if outer is not None:
        codes[(values < outer.lower) | (values > outer.upper)] = FAR_OUT
    return codes


def classify(
    sample: Sample,
    inner: FencePair,
    outer: Optional[FencePair] = None,
    contamination: Optional[Sequence[bool]] = None,
) -> DetectionReport:
    """Label each observation and compute Tukey whiskers.

    Raises:
        InvertedFences: inner.lower is not below inner.upper.
        InconsistentOuter: outer fences do not enclose the inner fences.
    """
    if not inner.lower < inner.upper:
        raise InvertedFences(
            f"Lower fence {inner.lower} is not below upper fence {inner.upper}",
            {"lower": inner.lower, "upper": inner.upper},
        )
    if outer is not None and not outer.contains(inner):
        raise InconsistentOuter(
            "Outer fences must enclose the inner fences",
            {"inner": [inner.lower, inner.upper], "outer": [outer.lower, outer.upper]},
        )

    flags: Optional[np.ndarray] = None
    if contamination is not None:
        flags = np.asarray(contamination, dtype=bool).reshape(-1)
        if flags.size != sample.n:
            raise InvalidParameters(
                "Contamination flags must match the sample size",
                {"n": sample.n, "flags": int(flags.size)},
            )
        flags.setflags(write=False)

    codes = label_codes(sample.original, inner, outer)
    codes.setflags(write=False)

    warnings: List[str] = []
    lo = int(np.searchsorted(sample.values, inner.lower, side="left"))
    hi = int(np.searchsorted(sample.values, inner.upper, side="right")) - 1
    if lo > hi:
        whisker_low, whisker_high = sample.q1, sample.q3
        warnings.append("no observation inside the fences; whiskers collapsed to the quartiles")
        logger.warning("degenerate_whiskers", lower=inner.lower, upper=inner.upper, n=sample.n)
    else:
        whisker_low, whisker_high = float(sample.values[lo]), float(sample.values[hi])

    n_low = int(np.count_nonzero(sample.original < inner.lower))
    n_high = int(np.count_nonzero(sample.original > inner.upper))

    return DetectionReport(
        codes=codes,
        values=sample.original,
        fence=inner,
        outer=outer,
        whisker_low=whisker_low,
        whisker_high=whisker_high,
        n_flagged=n_low + n_high,
        n_low=n_low,
        n_high=n_high,
        stats=summary(sample),
        contamination=flags,
        warnings=tuple(warnings),
    )


def resolve_method(
    sample: Sample, method: FenceMethod, model: Optional[DistributionModel] = None
) -> Tuple[FenceMethod, List[str]]:
    """Attach a fitted model to a non-normal method that lacks one."""
    if not isinstance(method, ChauvenetNonNormalMethod) or method.model is not None:
        return method, []
    warnings: List[str] = []
    if model is None:
        model, warnings = fit_model(sample, method.family)
    logger.debug("model_attached", family=model.family, model=model.describe())
    return method.model_copy(update={"model": model}), warnings


def detect(
    sample: Sample,
    method: FenceMethod,
    outer_method: Optional[FenceMethod] = None,
    model: Optional[DistributionModel] = None,
    contamination: Optional[Sequence[bool]] = None,
) -> DetectionReport:
    """Fit (when needed), compute fences and classify in one step."""
    method, warnings = resolve_method(sample, method, model)
    inner = compute_fences(sample, method)
    outer = None
    if outer_method is not None:
        outer_method, outer_warnings = resolve_method(sample, outer_method, model)
        warnings.extend(outer_warnings)
        outer = compute_fences(sample, outer_method)
    report = classify(sample, inner, outer, contamination)
    if warnings:
        report = DetectionReport(
            **{**report.__dict__, "warnings": tuple(warnings) + report.warnings}
        )
    return report


# Serialization


def _rounded(value: Optional[float], precision: int) -> Optional[float]:
    if value is None:
        return None
    return round(float(value), precision)


def _method_payload(pair: FencePair) -> Dict[str, Any]:
    payload = pair.method.model_dump(mode="json")
    payload["label"] = pair.method.label
    return payload


def report_summary(report: DetectionReport, precision: int = 6) -> Dict[str, Any]:
    """Summary object shared by the JSON document and the JSON-lines stream."""
    doc: Dict[str, Any] = {
        "method": _method_payload(report.fence),
        "n": report.n,
        "coefficients": {
            "lower": _rounded(report.fence.coefficient_lower, precision),
            "upper": _rounded(report.fence.coefficient_upper, precision),
        },
        "fences": {
            "lower": _rounded(report.fence.lower, precision),
            "upper": _rounded(report.fence.upper, precision),
        },
        "whiskers": {
            "low": _rounded(report.whisker_low, precision),
            "high": _rounded(report.whisker_high, precision),
        },
        "summary": {
            **{key: _rounded(value, precision) for key, value in report.stats.items() if key != "n"},
            "n_flagged": report.n_flagged,
            "n_low": report.n_low,
            "n_high": report.n_high,
        },
        "warnings": list(report.warnings),
    }
    if report.outer is not None:
        doc["outer_fences"] = {
            "lower": _rounded(report.outer.lower, precision),
            "upper": _rounded(report.outer.upper, precision),
            "method": _method_payload(report.outer),
        }
    if report.contamination is not None:
        doc["summary"]["true_positives"] = report.true_positives
        doc["summary"]["false_positives"] = report.false_positives
    return doc


def observation_records(report: DetectionReport, precision: int = 6) -> List[Dict[str, Any]]:
    """One record per observation, in input order."""
    records = []
    for index, (value, code) in enumerate(zip(report.values, report.codes)):
        record: Dict[str, Any] = {
            "index": index,
            "value": _rounded(value, precision),
            "label": _LABELS[code].value,
        }
        if report.contamination is not None:
            record["contaminated"] = bool(report.contamination[index])
        records.append(record)
    return records


def report_to_document(report: DetectionReport, precision: int = 6) -> Dict[str, Any]:
    """Single JSON document: {method, n, coefficients, fences, whiskers, labels[], summary}."""
    doc = report_summary(report, precision)
    doc["labels"] = observation_records(report, precision)
    return doc


def report_to_jsonl(report: DetectionReport, precision: int = 6) -> str:
    """One JSON object per observation followed by one summary object."""
    lines = [json.dumps(record) for record in observation_records(report, precision)]
    lines.append(json.dumps({"summary": report_summary(report, precision)}))
    return "\n".join(lines) + "\n"
