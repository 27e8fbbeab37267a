"""Fence method selectors and fence pair values."""

from typing import Annotated, ClassVar, Literal, Optional, Union

from pydantic import Field

from .base import BaseSchema
from .distribution import DistributionModel, FamilyName

# Published grid of the ER/TL approximations: n = 4m + 1, m in 2..124.
APPROXIMATION_M_RANGE = range(2, 125)


def in_approximation_grid(n: int) -> bool:
    """Whether n lies on the grid where the ER/TL approximations were fitted."""
    return (n - 1) % 4 == 0 and (n - 1) // 4 in APPROXIMATION_M_RANGE


class TukeyMethod(BaseSchema):
    """Tukey's constant coefficient; k=3 gives the outer fences."""

    kind: Literal["tukey"] = "tukey"
    k: float = Field(1.5, gt=0, allow_inf_nan=False)

    @property
    def label(self) -> str:
        return f"tukey(k={self.k:g})"


class ChauvenetTypeMethod(BaseSchema):
    """Sample-size adjusted coefficient derived from Chauvenet's criterion."""

    kind: Literal["chauvenet_type"] = "chauvenet_type"

    @property
    def label(self) -> str:
        return "chauvenet_type"


class ExactRateMethod(BaseSchema):
    """Exact some-outside rate coefficient (published approximation)."""

    kind: Literal["exact_rate"] = "exact_rate"
    alpha: Literal[0.05] = 0.05

    validity_domain: ClassVar[str] = "alpha=0.05, n=4m+1, m in 2..124"

    def is_valid_for(self, n: int) -> bool:
        return in_approximation_grid(n)

    @property
    def label(self) -> str:
        return "exact_rate"


class ToleranceLimitMethod(BaseSchema):
    """Tolerance-limit coefficient (published approximation)."""

    kind: Literal["tolerance_limit"] = "tolerance_limit"
    alpha: Literal[0.05] = 0.05
    gamma: Literal[0.9] = 0.9

    validity_domain: ClassVar[str] = "alpha=0.05, gamma=0.9, n=4m+1, m in 2..124"

    def is_valid_for(self, n: int) -> bool:
        return in_approximation_grid(n)

    @property
    def label(self) -> str:
        return "tolerance_limit"


class AsymptoticMethod(BaseSchema):
    """Asymptotic-fence coefficient with the smoothing polynomial a_n."""

    kind: Literal["asymptotic"] = "asymptotic"
    alpha: float = Field(0.05, gt=0, lt=1)

    @property
    def label(self) -> str:
        return f"asymptotic(alpha={self.alpha:g})"


class EmpiricalMethod(BaseSchema):
    """Empirically adjusted IQR coefficient 1.5 * (1 + 0.1 ln(n/10))."""

    kind: Literal["empirical"] = "empirical"

    @property
    def label(self) -> str:
        return "empirical"


class ChauvenetIntervalMethod(BaseSchema):
    """Chauvenet's criterion as a mean +/- c_n * sd interval."""

    kind: Literal["chauvenet_interval"] = "chauvenet_interval"

    @property
    def label(self) -> str:
        return "chauvenet_interval"


class SigmaClipMethod(BaseSchema):
    """Constant-multiple sigma clipping, mean +/- c * sd."""

    kind: Literal["sigma_clip"] = "sigma_clip"
    c: float = Field(3.0, gt=0, allow_inf_nan=False)

    @property
    def label(self) -> str:
        return f"sigma_clip(c={self.c:g})"


class ChauvenetNonNormalMethod(BaseSchema):
    """Asymmetric Chauvenet-type fences from a fitted parametric model.

    When ``model`` is omitted the detection pipeline fits ``family`` to the
    sample by the method of moments.
    """

    kind: Literal["chauvenet_type_non_normal"] = "chauvenet_type_non_normal"
    family: FamilyName = "normal"
    model: Optional[DistributionModel] = None

    @property
    def label(self) -> str:
        source = self.model.describe() if self.model is not None else self.family
        return f"chauvenet_type_non_normal({source})"


FenceMethod = Annotated[
    Union[
        TukeyMethod,
        ChauvenetTypeMethod,
        ExactRateMethod,
        ToleranceLimitMethod,
        AsymptoticMethod,
        EmpiricalMethod,
        ChauvenetIntervalMethod,
        SigmaClipMethod,
        ChauvenetNonNormalMethod,
    ],
    Field(discriminator="kind"),
]


class FencePair(BaseSchema):
    """Lower and upper fences with the coefficients that produced them."""

    lower: float = Field(description="Lower fence (LF)")
    upper: float = Field(description="Upper fence (UF)")
    coefficient_lower: float = Field(description="Coefficient used for LF")
    coefficient_upper: float = Field(description="Coefficient used for UF")
    method: FenceMethod

    @property
    def is_symmetric(self) -> bool:
        return self.coefficient_lower == self.coefficient_upper

    def contains(self, other: "FencePair") -> bool:
        """Whether this pair encloses ``other`` (used for outer fences)."""
        return self.lower <= other.lower and self.upper >= other.upper
