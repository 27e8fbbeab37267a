"""Command-line run configuration."""

from pathlib import Path
from typing import List, Literal, Optional, Union

from pydantic import Field, model_validator

from .base import BaseSchema
from .fences import FenceMethod

OutputFormat = Literal["json", "jsonl", "table", "svg"]


class InputSource(BaseSchema):
    """Exactly one of a CSV path, inline values or a bundled dataset."""

    path: Optional[Path] = None
    data: Optional[str] = None
    dataset: Optional[str] = None
    column: Optional[Union[int, str]] = None

    @model_validator(mode="after")
    def check_single_source(self) -> "InputSource":
        given = [name for name in ("path", "data", "dataset") if getattr(self, name) is not None]
        if len(given) != 1:
            raise ValueError(
                f"exactly one of --input, --data, --dataset is required; got {given or 'none'}"
            )
        if self.dataset is not None and not isinstance(self.column, str):
            raise ValueError("--dataset needs --column naming one of the dataset columns")
        return self

    @property
    def description(self) -> str:
        if self.path is not None:
            return str(self.path)
        if self.dataset is not None:
            return f"{self.dataset}:{self.column}"
        return "inline"


class RunConfig(BaseSchema):
    """Validated options shared by every subcommand."""

    command: Literal["fences", "detect", "simulate", "plot", "coefficients"]
    input: Optional[InputSource] = None
    methods: List[FenceMethod] = Field(default_factory=list)
    outer: Optional[FenceMethod] = None
    format: OutputFormat = "json"
    out: Optional[Path] = None
    seed: Optional[int] = Field(None, ge=0, lt=2**64)
    replicates: Optional[int] = Field(None, ge=1)

    @model_validator(mode="after")
    def check_input(self) -> "RunConfig":
        needs_input = self.command in ("fences", "detect", "plot")
        if needs_input and self.input is None:
            raise ValueError(f"{self.command} needs an input source")
        if not needs_input and self.input is not None:
            raise ValueError(f"{self.command} does not read input data")
        if self.format == "svg" and self.command not in ("plot", "coefficients"):
            raise ValueError("svg output is only available for plot and coefficients")
        if self.command == "plot" and self.format != "svg":
            raise ValueError("plot only produces svg output")
        return self
