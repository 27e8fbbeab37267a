"""Pydantic schemas for models, fence methods and run configuration."""

from .base import *
from .distribution import *
from .fences import *
from .simulation import *
from .run import *

__all__ = [
    # Base schemas
    "BaseSchema",
    "ErrorPayload",

    # Distribution models
    "NormalModel",
    "GammaModel",
    "ChiSquareModel",
    "StudentTModel",
    "DistributionModel",
    "FamilyName",

    # Fence methods
    "TukeyMethod",
    "ChauvenetTypeMethod",
    "ExactRateMethod",
    "ToleranceLimitMethod",
    "AsymptoticMethod",
    "EmpiricalMethod",
    "ChauvenetIntervalMethod",
    "SigmaClipMethod",
    "ChauvenetNonNormalMethod",
    "FenceMethod",
    "FencePair",

    # Simulation
    "NormalGenerator",
    "ChiSquareGenerator",
    "StudentTGenerator",
    "GammaGenerator",
    "BetaGenerator",
    "ExponentialGenerator",
    "LogNormalGenerator",
    "GeneratorSpec",
    "Contamination",
    "SimConfig",
    "MethodSummary",
    "SimResult",
    "OutsideRate",

    # Run configuration
    "InputSource",
    "RunConfig",
]
