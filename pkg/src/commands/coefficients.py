"""``coefficients`` subcommand: coefficient table or curves across n."""

import argparse
import json
from typing import Any, List

from src.core.exceptions import InvalidConfig
from src.core.logging import get_command_logger
from src.core.settings import Settings
from src.schemas.run import RunConfig
from src.services.fences import COEFFICIENT_KINDS, coefficient_table
from src.services.render import render_coefficient_curves
from src.utils.tables import aligned_table

HELP = "Tabulate or chart fence coefficients against the sample size"


def add_parser(subparsers: Any, parents: List[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("coefficients", help=HELP, description=HELP, parents=parents)
    parser.add_argument("--n-min", type=int, default=5)
    parser.add_argument("--n-max", type=int, default=497)
    parser.add_argument("--step", type=int, default=4, help="Spacing between sample sizes")
    parser.add_argument(
        "--kinds",
        default=",".join(COEFFICIENT_KINDS),
        help=f"Comma-separated subset of {', '.join(COEFFICIENT_KINDS)}",
    )
    parser.set_defaults(default_format="table")


def run(config: RunConfig, args: argparse.Namespace, settings: Settings) -> str:
    """Tabulate or chart fence coefficients over a range of n."""
    if args.n_min < 2 or args.n_max < args.n_min or args.step < 1:
        raise InvalidConfig(
            "Need 2 <= n-min <= n-max and step >= 1",
            {"n_min": args.n_min, "n_max": args.n_max, "step": args.step},
        )
    kinds = [k.strip() for k in args.kinds.split(",") if k.strip()]
    ns = list(range(args.n_min, args.n_max + 1, args.step))
    get_command_logger("coefficients").info("coefficients_requested", count=len(ns), kinds=kinds)

    if config.format == "svg":
        return render_coefficient_curves(ns, kinds)

    rows = coefficient_table(ns, kinds)
    precision = settings.output_precision
    if config.format == "table":
        by_n = {}
        for row in rows:
            by_n.setdefault(row["n"], {})[row["kind"]] = row["coefficient"]
        table_rows = [[n, *(by_n[n][k] for k in kinds)] for n in ns]
        return aligned_table(["n", *kinds], table_rows, precision)
    for row in rows:
        if row["coefficient"] is not None:
            row["coefficient"] = round(row["coefficient"], precision)
    return json.dumps({"rows": rows}) + "\n"
