"""``detect`` subcommand: label every observation."""

import argparse
import json
from typing import Any, List

from src.core.logging import get_command_logger
from src.core.settings import Settings
from src.schemas.run import RunConfig
from src.services.detect import detect, observation_records, report_to_document, report_to_jsonl
from src.utils.tables import aligned_table

from .dependencies import load_sample

HELP = "Label observations as inlier, outside or far out"


def add_parser(subparsers: Any, parents: List[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("detect", help=HELP, description=HELP, parents=parents)
    parser.add_argument(
        "--outer-k",
        type=float,
        help="Tukey coefficient of an outer fence pair for far-out labels (e.g. 3)",
    )
    parser.set_defaults(default_method="chauvenet_type")


def run(config: RunConfig, args: argparse.Namespace, settings: Settings) -> str:
    """Label every observation against one fence method."""
    assert config.input is not None
    logger = get_command_logger("detect", source=config.input.description)
    sample = load_sample(config.input, settings)
    precision = settings.output_precision

    report = detect(sample, config.methods[0], outer_method=config.outer)
    logger.info("detect_completed", n=sample.n, flagged=report.n_flagged)
    for warning in report.warnings:
        logger.warning("detect_warning", warning=warning)

    if config.format == "jsonl":
        return report_to_jsonl(report, precision)
    if config.format == "table":
        rows = [
            [r["index"], r["value"], r["label"]]
            for r in observation_records(report, precision)
        ]
        header = (
            f"# {report.fence.method.label}: LF={report.fence.lower:.{precision}f} "
            f"UF={report.fence.upper:.{precision}f} flagged={report.n_flagged}\n"
        )
        return header + aligned_table(["index", "value", "label"], rows, precision, left=["label"])
    return json.dumps(report_to_document(report, precision)) + "\n"
