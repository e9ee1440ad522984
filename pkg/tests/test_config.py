"""
Tests for config.py
"""

import os

import pytest

from src.config import Outcome, SolverConfig
from src.errors import ConfigError


class TestOutcome:
    """Outcome tags and their exit codes."""

    def test_exit_codes(self):
        assert Outcome.SUCCESS.exit_code == 0
        assert Outcome.LOWER_DEGREE_SUSPECTED.exit_code == 0
        assert Outcome.FAIL.exit_code == 2

    def test_values(self):
        assert Outcome("success") is Outcome.SUCCESS
        assert Outcome("lower_degree_suspected") is Outcome.LOWER_DEGREE_SUSPECTED


class TestSolverConfig:
    """Defaults and validation."""

    def test_defaults(self):
        config = SolverConfig()
        assert config.seed == 0
        assert config.repeat == 3
        assert config.threads == 1
        assert config.sigma == 30
        assert config.log_level == "WARNING"

    def test_log_level_normalized(self):
        assert SolverConfig(log_level="debug").log_level == "DEBUG"

    @pytest.mark.parametrize("kwargs", [
        {"repeat": 0},
        {"threads": 0},
        {"sigma": -1},
        {"seed": -5},
        {"log_level": "LOUD"},
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(ConfigError):
            SolverConfig(**kwargs)

    def test_with_overrides(self):
        config = SolverConfig().with_overrides(seed=7, repeat=None, sigma=12)
        assert config.seed == 7
        assert config.repeat == 3
        assert config.sigma == 12

    def test_overrides_are_validated(self):
        with pytest.raises(ConfigError):
            SolverConfig().with_overrides(threads=0)


class TestFromEnv:
    """MHSOLVE_* variables and dotenv files."""

    def test_environment(self, monkeypatch):
        monkeypatch.setenv("MHSOLVE_SEED", "42")
        monkeypatch.setenv("MHSOLVE_LOG_LEVEL", "info")
        config = SolverConfig.from_env()
        assert config.seed == 42
        assert config.log_level == "INFO"

    def test_empty_value_ignored(self, monkeypatch):
        monkeypatch.setenv("MHSOLVE_REPEAT", "")
        assert SolverConfig.from_env().repeat == 3

    def test_not_an_integer(self, monkeypatch):
        monkeypatch.setenv("MHSOLVE_THREADS", "many")
        with pytest.raises(ConfigError):
            SolverConfig.from_env()

    def test_env_file(self, tmp_path, monkeypatch):
        monkeypatch.delenv("MHSOLVE_REPEAT", raising=False)
        monkeypatch.delenv("MHSOLVE_SIGMA", raising=False)
        env = tmp_path / "solver.env"
        env.write_text("MHSOLVE_REPEAT=5\nMHSOLVE_SIGMA=40\n", encoding="utf-8")
        try:
            config = SolverConfig.from_env(str(env))
        finally:
            os.environ.pop("MHSOLVE_REPEAT", None)
            os.environ.pop("MHSOLVE_SIGMA", None)
        assert config.repeat == 5
        assert config.sigma == 40

    def test_environment_wins_over_file(self, tmp_path, monkeypatch):
        monkeypatch.setenv("MHSOLVE_REPEAT", "2")
        env = tmp_path / "solver.env"
        env.write_text("MHSOLVE_REPEAT=9\n", encoding="utf-8")
        assert SolverConfig.from_env(str(env)).repeat == 2
