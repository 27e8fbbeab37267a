"""Base Pydantic schemas shared by all value types."""

from typing import Any, Dict, Optional

from pydantic import BaseModel, ConfigDict, Field


class BaseSchema(BaseModel):
    """Base schema with common configuration.

    Value types are immutable once validated.
    """

    model_config = ConfigDict(
        frozen=True,
        populate_by_name=True,
        str_strip_whitespace=True,
        extra="forbid",
    )


class ErrorPayload(BaseSchema):
    """One-line machine-readable error emitted by the command line."""

    error: str = Field(description="Stable error code")
    message: str = Field(description="Human-readable explanation")
    details: Optional[Dict[str, Any]] = Field(
        None, description="Additional context about the error"
    )
