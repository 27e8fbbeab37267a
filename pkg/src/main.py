"""Command-line entry point for the Chauvenet-type boxplot toolkit."""

import argparse
import json
import sys
from typing import Any, Dict, List, Optional

import structlog

from src.commands import coefficients, detect, fences, plot, simulate
from src.commands.dependencies import build_method, build_methods, make_run_config, write_output
from src.core.exceptions import InternalError, InvalidConfig, ToolkitError, UsageError
from src.core.logging import configure_logging
from src.core.settings import Settings, get_settings
from src.schemas.run import RunConfig
from src.utils.validators import parse_column_selector

logger = structlog.get_logger("chaubox")

COMMANDS = {
    "fences": fences,
    "detect": detect,
    "simulate": simulate,
    "plot": plot,
    "coefficients": coefficients,
}
INPUT_COMMANDS = ("fences", "detect", "plot")


class ToolkitArgumentParser(argparse.ArgumentParser):
    """Argument parser that raises UsageError instead of exiting."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message, {"usage": self.format_usage().strip()})


def _input_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group("input (exactly one source)")
    group.add_argument("--input", help="CSV file path")
    group.add_argument("--data", help='Inline values, e.g. "1,2,3"')
    group.add_argument("--dataset", help="Bundled dataset name (hk_pay)")
    group.add_argument("--column", help="Column name or zero-based index")
    return parent


def _method_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group("method")
    group.add_argument(
        "--method",
        help="Fence method kind or comma-separated kinds: tukey, chauvenet_type, exact_rate, "
        "tolerance_limit, asymptotic, empirical, chauvenet_interval, sigma_clip, "
        "chauvenet_type_non_normal",
    )
    group.add_argument("--k", type=float, help="Tukey coefficient")
    group.add_argument("--alpha", type=float, help="Significance level")
    group.add_argument("--gamma", type=float, help="Tolerance-limit confidence")
    group.add_argument("--family", help="Distribution family")
    group.add_argument("--c", type=float, help="Sigma-clipping multiple")
    return parent


def _output_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group("output")
    group.add_argument("--format", choices=["json", "jsonl", "table", "svg"])
    group.add_argument("--out", help="Write to this path instead of standard output")
    return parent


def build_parser() -> argparse.ArgumentParser:
    """Build the top-level parser with one subparser per command."""
    parser = ToolkitArgumentParser(
        prog="chaubox",
        description="Outlier detection with Chauvenet-type and sample-size adjusted boxplots",
    )
    parser.add_argument(
        "--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
    )
    subparsers = parser.add_subparsers(
        dest="command", required=True, parser_class=ToolkitArgumentParser
    )
    inputs, methods, output = _input_parent(), _method_parent(), _output_parent()

    fences.add_parser(subparsers, [inputs, methods, output])
    detect.add_parser(subparsers, [inputs, methods, output])
    plot.add_parser(subparsers, [inputs, methods, output])
    simulate.add_parser(subparsers, [methods, output])
    coefficients.add_parser(subparsers, [output])

    # plot accepts --panels as the natural spelling of its method list
    subparsers.choices["plot"].add_argument(
        "--panels", dest="method", help="Comma-separated methods, one panel each"
    )
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Validate parsed arguments into a RunConfig before any computation."""
    command = args.command
    data: Dict[str, Any] = {
        "command": command,
        "format": args.format or getattr(args, "default_format", "json"),
        "out": args.out,
        "seed": getattr(args, "seed", None),
        "replicates": getattr(args, "replicates", None),
    }
    if command in INPUT_COMMANDS:
        data["input"] = {
            "path": args.input,
            "data": args.data,
            "dataset": args.dataset,
            "column": parse_column_selector(args.column),
        }

    if command != "coefficients":
        family = args.family
        if command == "simulate":
            family = simulate.fit_family_for(args.family or "normal")
        options = {
            "k": args.k,
            "alpha": args.alpha,
            "gamma": args.gamma,
            "family": family,
            "c": args.c,
        }
        kinds = args.method if args.method is not None else args.default_method
        method_list = build_methods(kinds, **options)
        if not method_list and command != "plot":
            raise InvalidConfig(f"{command} needs at least one method")
        if command == "detect" and len(method_list) > 1:
            raise InvalidConfig(
                "detect labels against one method at a time",
                {"methods": [m.kind for m in method_list]},
            )
        data["methods"] = method_list
        outer_k = getattr(args, "outer_k", None)
        if outer_k is not None:
            data["outer"] = build_method("tukey", k=outer_k)

    return make_run_config(**data)


def _emit_error(error: ToolkitError) -> None:
    sys.stderr.write(json.dumps(error.to_dict(), default=str) + "\n")
    sys.stderr.flush()


def main(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand; returns 0 on success, 2 on toolkit errors, 1 otherwise."""
    settings: Settings = get_settings()
    configure_logging(settings)
    command = None
    try:
        args = build_parser().parse_args(argv)
        command = args.command
        if args.log_level:
            settings = settings.model_copy(update={"log_level": args.log_level})
            configure_logging(settings, force=True)
        config = config_from_args(args)
        text = COMMANDS[command].run(config, args, settings)
        write_output(text, config.out)
        return 0
    except ToolkitError as e:
        logger.info("command_failed", command=command, code=e.code, message=e.message)
        _emit_error(e)
        return 2
    except Exception as e:  # noqa: BLE001
        logger.exception("unexpected_error", command=command)
        _emit_error(InternalError(e))
        return 1


if __name__ == "__main__":
    sys.exit(main())
