"""Monte Carlo configuration and result schemas."""

from typing import Annotated, List, Literal, Union

from pydantic import Field, model_validator

from .base import BaseSchema
from .fences import FenceMethod


class NormalGenerator(BaseSchema):
    family: Literal["normal"] = "normal"
    mu: float = Field(0.0, allow_inf_nan=False)
    sigma: float = Field(1.0, gt=0, allow_inf_nan=False)


class ChiSquareGenerator(BaseSchema):
    family: Literal["chi_square"] = "chi_square"
    dof: float = Field(8.0, gt=0, allow_inf_nan=False)


class StudentTGenerator(BaseSchema):
    family: Literal["student_t"] = "student_t"
    dof: float = Field(8.0, gt=0, allow_inf_nan=False)


class GammaGenerator(BaseSchema):
    family: Literal["gamma"] = "gamma"
    shape: float = Field(gt=0, allow_inf_nan=False)
    scale: float = Field(1.0, gt=0, allow_inf_nan=False)


class BetaGenerator(BaseSchema):
    family: Literal["beta"] = "beta"
    a: float = Field(gt=0, allow_inf_nan=False)
    b: float = Field(gt=0, allow_inf_nan=False)


class ExponentialGenerator(BaseSchema):
    family: Literal["exponential"] = "exponential"
    scale: float = Field(1.0, gt=0, allow_inf_nan=False)


class LogNormalGenerator(BaseSchema):
    family: Literal["log_normal"] = "log_normal"
    mu: float = Field(0.0, allow_inf_nan=False)
    sigma: float = Field(1.0, gt=0, allow_inf_nan=False)


GeneratorSpec = Annotated[
    Union[
        NormalGenerator,
        ChiSquareGenerator,
        StudentTGenerator,
        GammaGenerator,
        BetaGenerator,
        ExponentialGenerator,
        LogNormalGenerator,
    ],
    Field(discriminator="family"),
]


class Contamination(BaseSchema):
    """A known outlier value appended ``count`` times to every replicate."""

    value: float = Field(allow_inf_nan=False)
    count: int = Field(1, ge=1)


class SimConfig(BaseSchema):
    """One Monte Carlo experiment."""

    generator: GeneratorSpec = Field(default_factory=NormalGenerator)
    n: int = Field(ge=4, description="Total sample size including contamination")
    contamination: List[Contamination] = Field(default_factory=list)
    replicates: int = Field(1, ge=1)
    seed: int = Field(1863, ge=0, lt=2**64)
    methods: List[FenceMethod] = Field(min_length=1)

    @property
    def n_contaminated(self) -> int:
        return sum(c.count for c in self.contamination)

    @property
    def n_genuine(self) -> int:
        return self.n - self.n_contaminated

    @model_validator(mode="after")
    def check_contamination(self) -> "SimConfig":
        if 4 * self.n_contaminated >= self.n:
            raise ValueError(
                f"contamination count {self.n_contaminated} must stay below n/4 (n={self.n})"
            )
        return self


class MethodSummary(BaseSchema):
    """Aggregated counts for one fence method over all replicates."""

    method: str
    mean_flagged: float
    se_flagged: float
    mean_false_positives: float
    se_false_positives: float
    mean_true_positives: float
    se_true_positives: float
    outside_rate: float = Field(description="False positives per genuine observation")
    outside_rate_se: float
    fallback_replicates: int = Field(0, description="Replicates whose model fit fell back")
    flagged_counts: List[int] = Field(default_factory=list, exclude=True)
    false_positive_counts: List[int] = Field(default_factory=list, exclude=True)
    true_positive_counts: List[int] = Field(default_factory=list, exclude=True)


class SimResult(BaseSchema):
    config: SimConfig
    methods: List[MethodSummary]
    elapsed_seconds: float = Field(0.0, exclude=True)


class OutsideRate(BaseSchema):
    rate: float
    standard_error: float
    replicates: int
