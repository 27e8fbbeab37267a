"""Parametric distribution models used for quantile thresholds."""

from typing import Annotated, Literal, Union

from pydantic import Field

from .base import BaseSchema


class NormalModel(BaseSchema):
    """Normal distribution N(mu, sigma^2)."""

    family: Literal["normal"] = "normal"
    mu: float = Field(0.0, allow_inf_nan=False, description="Location")
    sigma: float = Field(1.0, gt=0, allow_inf_nan=False, description="Scale")

    def describe(self) -> str:
        return f"normal(mu={self.mu:g}, sigma={self.sigma:g})"


class GammaModel(BaseSchema):
    """Gamma distribution with shape alpha and scale beta."""

    family: Literal["gamma"] = "gamma"
    shape: float = Field(gt=0, allow_inf_nan=False, description="Shape (alpha)")
    scale: float = Field(gt=0, allow_inf_nan=False, description="Scale (beta)")

    def describe(self) -> str:
        return f"gamma(shape={self.shape:g}, scale={self.scale:g})"


class ChiSquareModel(BaseSchema):
    """Chi-square distribution with real-valued degrees of freedom."""

    family: Literal["chi_square"] = "chi_square"
    dof: float = Field(gt=0, allow_inf_nan=False, description="Degrees of freedom (nu)")

    def describe(self) -> str:
        return f"chi_square(dof={self.dof:g})"

    def as_gamma(self) -> GammaModel:
        """The identical gamma(nu/2, 2) model."""
        return GammaModel(shape=self.dof / 2.0, scale=2.0)


class StudentTModel(BaseSchema):
    """Standard Student-t distribution with real-valued degrees of freedom."""

    family: Literal["student_t"] = "student_t"
    dof: float = Field(gt=0, allow_inf_nan=False, description="Degrees of freedom (nu)")

    def describe(self) -> str:
        return f"student_t(dof={self.dof:g})"


DistributionModel = Annotated[
    Union[NormalModel, GammaModel, ChiSquareModel, StudentTModel],
    Field(discriminator="family"),
]

FamilyName = Literal["normal", "gamma", "chi_square", "student_t"]
