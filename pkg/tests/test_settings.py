"""Tests for settings and logging configuration."""

import json
import logging

import pytest
import structlog
from pydantic import ValidationError

import src
from src.core.exceptions import DegenerateIQR, InternalError, ToolkitError
from src.core.logging import StderrHandler, configure_logging, get_command_logger
from src.core.settings import Settings, get_settings


@pytest.mark.unit
class TestSettings:
    def test_test_environment(self, test_settings):
        """Test the test environment flag."""
        assert test_settings.environment == "test"
        assert test_settings.is_testing
        assert not test_settings.is_production

    def test_defaults(self, test_settings):
        """Test default settings."""
        assert test_settings.default_seed == 1863
        assert test_settings.output_precision == 6
        assert test_settings.max_workers == 1

    def test_environment_override(self, monkeypatch):
        """Test overrides from the environment."""
        monkeypatch.setenv("CHAUBOX_DEFAULT_REPLICATES", "250")
        monkeypatch.setenv("CHAUBOX_LOG_LEVEL", "debug")
        get_settings.cache_clear()

        settings = get_settings()
        assert settings.default_replicates == 250
        assert settings.log_level == "DEBUG"

    @pytest.mark.parametrize(
        "field,value",
        [("environment", "staging"), ("log_level", "LOUD"), ("log_format", "xml"), ("jitter_width", 0.9)],
    )
    def test_invalid_values(self, field, value):
        """Test invalid setting values."""
        with pytest.raises(ValidationError):
            Settings(**{field: value})

    def test_cached(self):
        """Test that settings are cached."""
        assert get_settings() is get_settings()

    def test_version(self):
        """Test the package version."""
        assert src.__version__ == "0.1.0"


@pytest.mark.unit
class TestLogging:
    def test_records_go_to_stderr(self, capsys):
        """Test that log records go to stderr."""
        settings = Settings(log_level="INFO", log_format="json")
        configure_logging(settings, force=True)
        try:
            get_command_logger("fences", source="inline").info("fences_completed", n=9)
            captured = capsys.readouterr()
        finally:
            configure_logging(get_settings(), force=True)

        assert captured.out == ""
        assert "fences_completed" in captured.err
        assert isinstance(logging.getLogger().handlers[0], StderrHandler)

    def test_level_filters(self, capsys):
        """Test log level filtering."""
        configure_logging(Settings(log_level="ERROR"), force=True)
        try:
            structlog.get_logger("chaubox.test").warning("hidden")
            captured = capsys.readouterr()
        finally:
            configure_logging(get_settings(), force=True)

        assert "hidden" not in captured.err


@pytest.mark.unit
class TestErrors:
    def test_error_payload(self):
        """Test the error payload."""
        error = DegenerateIQR("Interquartile range is zero", {"q1": 1.0, "q3": 1.0})
        payload = error.to_dict()

        assert isinstance(error, ToolkitError)
        assert payload == {
            "error": "DEGENERATE_IQR",
            "message": "Interquartile range is zero",
            "details": {"q1": 1.0, "q3": 1.0},
        }
        json.dumps(payload)

    def test_payload_without_details(self):
        """Test an error payload without details."""
        assert ToolkitError("boom").to_dict() == {"error": "TOOLKIT_ERROR", "message": "boom"}

    def test_unexpected_errors_are_wrapped(self):
        """Test that unexpected exceptions use the same error payload."""
        assert InternalError(KeyError("x")).to_dict() == {"error": "INTERNAL_ERROR", "message": "'x'"}
        assert InternalError(RuntimeError()).to_dict()["message"] == "RuntimeError"
