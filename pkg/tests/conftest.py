"""Pytest configuration and fixtures."""

import json
from dataclasses import dataclass
from typing import Any, Callable, List

import pytest
from hypothesis import HealthCheck, settings

from src.core.settings import get_settings
from src.data import get_dataset
from src.main import main
from src.services.core_stats import Sample, build_sample

# Seven standard-normal draws followed by two contaminated values of 100.
TOY_VALUES = [-1.938, -1.177, -0.854, -0.353, 0.890, 0.916, 1.741, 100.0, 100.0]

settings.register_profile(
    "chaubox",
    deadline=None,
    suppress_health_check=[HealthCheck.function_scoped_fixture],
)
settings.load_profile("chaubox")


@pytest.fixture(autouse=True)
def test_settings(monkeypatch):
    """Fresh settings for every test, read from a test environment."""
    monkeypatch.setenv("CHAUBOX_ENVIRONMENT", "test")
    monkeypatch.setenv("CHAUBOX_LOG_LEVEL", "WARNING")
    get_settings.cache_clear()
    yield get_settings()
    get_settings.cache_clear()


@pytest.fixture
def toy_values() -> List[float]:
    return list(TOY_VALUES)


@pytest.fixture
def toy_sample(toy_values) -> Sample:
    return build_sample(toy_values)


@pytest.fixture
def junior_values() -> List[float]:
    """Junior civil servant pay adjustment rates (percent), newest tax year first."""
    return get_dataset("hk_pay").column("junior").values


@pytest.fixture
def senior_values() -> List[float]:
    return get_dataset("hk_pay").column("senior").values


@pytest.fixture
def junior_sample(junior_values) -> Sample:
    return build_sample(junior_values)


@pytest.fixture
def senior_sample(senior_values) -> Sample:
    return build_sample(senior_values)


@dataclass
class CliResult:
    exit_code: int
    stdout: str
    stderr: str

    def json(self) -> Any:
        return json.loads(self.stdout)

    def error(self) -> Any:
        """The one-line JSON error reason (last stderr line)."""
        return json.loads(self.stderr.strip().splitlines()[-1])


@pytest.fixture
def run_cli(capsys) -> Callable[..., CliResult]:
    """Invoke the command line in-process and capture its output."""

    def _run(*argv: str) -> CliResult:
        capsys.readouterr()
        exit_code = main(list(argv))
        captured = capsys.readouterr()
        return CliResult(exit_code=exit_code, stdout=captured.out, stderr=captured.err)

    return _run
