"""``plot`` subcommand: side-by-side boxplot panels as SVG."""

import argparse
from typing import Any, List

from src.core.logging import get_command_logger
from src.core.settings import Settings
from src.schemas.run import RunConfig
from src.services.detect import detect
from src.services.render import PlotPanel, PlotSpec, render_boxplots

from .dependencies import load_sample

HELP = "Render boxplots for one or more methods as an SVG document"


def add_parser(subparsers: Any, parents: List[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("plot", help=HELP, description=HELP, parents=parents)
    parser.add_argument("--title", default="", help="Document title")
    parser.add_argument("--y-label", default="", help="Vertical axis label")
    parser.set_defaults(default_method="tukey,chauvenet_type", default_format="svg")


def run(config: RunConfig, args: argparse.Namespace, settings: Settings) -> str:
    """Label the sample once per panel method and render the boxplots."""
    assert config.input is not None
    logger = get_command_logger("plot", source=config.input.description)
    sample = load_sample(config.input, settings)

    panels = []
    for method in config.methods:
        report = detect(sample, method, outer_method=config.outer)
        panels.append(PlotPanel(title=report.fence.method.label, sample=sample, report=report))
    spec = PlotSpec.from_settings(panels, settings, title=args.title, y_label=args.y_label)
    logger.info("plot_completed", panels=len(panels))
    return render_boxplots(spec)
