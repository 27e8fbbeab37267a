"""Shared helpers for subcommands: input loading, method selection, output."""

import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import TypeAdapter, ValidationError

from src.core.exceptions import InvalidConfig, InvalidParameters
from src.core.settings import Settings
from src.data import get_dataset
from src.schemas.fences import FenceMethod
from src.schemas.run import InputSource, RunConfig
from src.services.core_stats import Sample, build_sample
from src.utils.validators import parse_inline_values, read_csv_column

_method_adapter: TypeAdapter = TypeAdapter(FenceMethod)

# Options each method kind accepts; anything else given on the command line is ignored for it.
METHOD_PARAMETERS: Dict[str, tuple] = {
    "tukey": ("k",),
    "chauvenet_type": (),
    "exact_rate": ("alpha",),
    "tolerance_limit": ("alpha", "gamma"),
    "asymptotic": ("alpha",),
    "empirical": (),
    "chauvenet_interval": (),
    "sigma_clip": ("c",),
    "chauvenet_type_non_normal": ("family",),
}


def build_method(kind: str, **options: Any) -> FenceMethod:
    """Validated FenceMethod from a kind name and command-line options."""
    kind = kind.strip()
    if kind not in METHOD_PARAMETERS:
        raise InvalidParameters(
            f"Unknown method: {kind}", {"method": kind, "valid": sorted(METHOD_PARAMETERS)}
        )
    params = {
        name: options[name]
        for name in METHOD_PARAMETERS[kind]
        if options.get(name) is not None
    }
    try:
        return _method_adapter.validate_python({"kind": kind, **params})
    except ValidationError as e:
        raise InvalidParameters(
            f"Invalid parameters for {kind}: {params}",
            {"method": kind, "errors": e.errors(include_url=False, include_context=False)},
        ) from e


def build_methods(kinds: str, **options: Any) -> List[FenceMethod]:
    """Comma-separated method list, e.g. ``tukey,chauvenet_type``."""
    names = [name for name in kinds.split(",") if name.strip()]
    return [build_method(name, **options) for name in names]


def make_run_config(**data: Any) -> RunConfig:
    """Validate a RunConfig, reporting field errors as InvalidConfig."""
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        first = e.errors(include_url=False, include_context=False)[0]
        raise InvalidConfig(
            str(first.get("msg", "invalid run configuration")),
            {"errors": e.errors(include_url=False, include_context=False)},
        ) from e


def load_sample(source: InputSource, settings: Settings) -> Sample:
    """Read the configured input source into a Sample."""
    if source.dataset is not None:
        values = get_dataset(source.dataset).column(str(source.column)).values
    elif source.data is not None:
        values = parse_inline_values(source.data)
    else:
        assert source.path is not None
        values = read_csv_column(source.path, source.column, settings.max_input_rows).values
    return build_sample(values)


def write_output(text: str, out: Optional[Path] = None) -> None:
    """Write a document to ``out`` or standard output."""
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")
