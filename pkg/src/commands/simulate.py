"""``simulate`` subcommand: Monte Carlo outlier-labeling rates."""

import argparse
import json
from typing import Any, Dict, List, get_args

from src.core.logging import get_command_logger
from src.core.settings import Settings
from src.schemas.distribution import FamilyName
from src.schemas.run import RunConfig
from src.services.sim import make_sim_config, result_table, run_simulation
from src.utils.validators import parse_contamination

HELP = "Estimate flagged, false-positive and true-positive counts by simulation"

GENERATOR_PARAMETERS: Dict[str, tuple] = {
    "normal": ("mu", "sigma"),
    "chi_square": ("dof",),
    "student_t": ("dof",),
    "gamma": ("shape", "scale"),
    "beta": ("a", "b"),
    "exponential": ("scale",),
    "log_normal": ("mu", "sigma"),
}


def add_parser(subparsers: Any, parents: List[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("simulate", help=HELP, description=HELP, parents=parents)
    parser.add_argument("--n", type=int, required=True, help="Sample size including contamination")
    parser.add_argument("--replicates", type=int, help="Number of replicates (default from settings)")
    parser.add_argument("--seed", type=int, help="Base seed (default from settings; echoed in output)")
    parser.add_argument("--workers", type=int, help="Worker processes (default from settings)")
    parser.add_argument(
        "--contaminate",
        action="append",
        default=[],
        metavar="VALUE:COUNT",
        help="Append a known outlier value COUNT times (repeatable)",
    )
    generator = parser.add_argument_group("generator parameters")
    generator.add_argument("--mu", type=float)
    generator.add_argument("--sigma", type=float)
    generator.add_argument("--dof", type=float)
    generator.add_argument("--shape", type=float)
    generator.add_argument("--scale", type=float)
    generator.add_argument("--a", type=float)
    generator.add_argument("--b", type=float)
    parser.set_defaults(default_method="tukey,chauvenet_type", default_format="json")


def generator_spec(args: argparse.Namespace) -> Dict[str, Any]:
    """Generator mapping from ``--family`` and its parameters."""
    family = args.family or "normal"
    spec: Dict[str, Any] = {"family": family}
    for name in GENERATOR_PARAMETERS.get(family, ()):
        value = getattr(args, name, None)
        if value is not None:
            spec[name] = value
    return spec


def fit_family_for(generator_family: str) -> str:
    """Family fitted by non-normal fences: the generator's own when it is fittable."""
    return generator_family if generator_family in get_args(FamilyName) else "normal"


def run(config: RunConfig, args: argparse.Namespace, settings: Settings) -> str:
    """Run a seeded Monte Carlo study and serialize the summaries."""
    contamination = [
        {"value": value, "count": count}
        for value, count in (parse_contamination(text) for text in args.contaminate)
    ]
    sim_config = make_sim_config(
        generator=generator_spec(args),
        n=args.n,
        contamination=contamination,
        replicates=config.replicates or settings.default_replicates,
        seed=config.seed if config.seed is not None else settings.default_seed,
        methods=config.methods,
    )
    logger = get_command_logger("simulate", seed=sim_config.seed)
    result = run_simulation(sim_config, max_workers=args.workers)
    logger.info("simulate_completed", replicates=sim_config.replicates)

    if config.format == "table":
        header = (
            f"# {sim_config.generator.family} n={sim_config.n} replicates={sim_config.replicates} "
            f"seed={sim_config.seed}\n"
        )
        return header + result_table(result, settings.output_precision)
    return json.dumps(result.model_dump(mode="json")) + "\n"
