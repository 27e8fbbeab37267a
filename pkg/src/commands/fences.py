"""``fences`` subcommand: coefficients and fences per requested method."""

import argparse
import json
from typing import Any, Dict, List

from src.core.logging import get_command_logger
from src.core.settings import Settings
from src.schemas.fences import FencePair
from src.schemas.run import RunConfig
from src.services.core_stats import summary
from src.services.detect import resolve_method
from src.services.fences import compute_fences
from src.utils.tables import aligned_table

from .dependencies import load_sample

HELP = "Compute fence coefficients and fences for one or more methods"


def add_parser(subparsers: Any, parents: List[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("fences", help=HELP, description=HELP, parents=parents)
    parser.set_defaults(default_method="chauvenet_type")


def _pair_payload(pair: FencePair, precision: int) -> Dict[str, Any]:
    return {
        "method": {**pair.method.model_dump(mode="json"), "label": pair.method.label},
        "coefficients": {
            "lower": round(pair.coefficient_lower, precision),
            "upper": round(pair.coefficient_upper, precision),
        },
        "fences": {"lower": round(pair.lower, precision), "upper": round(pair.upper, precision)},
    }


def run(config: RunConfig, args: argparse.Namespace, settings: Settings) -> str:
    """Compute fences for each requested method."""
    assert config.input is not None
    logger = get_command_logger("fences", source=config.input.description)
    sample = load_sample(config.input, settings)
    precision = settings.output_precision

    pairs = []
    warnings: List[str] = []
    for method in config.methods:
        resolved, fit_warnings = resolve_method(sample, method)
        warnings.extend(fit_warnings)
        pairs.append(compute_fences(sample, resolved))
    logger.info("fences_completed", n=sample.n, methods=[p.method.kind for p in pairs])

    if config.format == "table":
        rows = [
            [p.method.label, p.coefficient_lower, p.coefficient_upper, p.lower, p.upper]
            for p in pairs
        ]
        return aligned_table(["method", "k_lower", "k_upper", "LF", "UF"], rows, precision, left=["method"])

    doc = {
        "input": config.input.description,
        "n": sample.n,
        "summary": {k: round(float(v), precision) for k, v in summary(sample).items() if k != "n"},
        "fences": [_pair_payload(p, precision) for p in pairs],
        "warnings": warnings,
    }
    return json.dumps(doc) + "\n"
