"""
Tests for run_tests.py
"""

import os
from pathlib import Path

import run_tests

ROOT = Path(__file__).resolve().parent.parent


class TestPytestArgs:
    """Arguments handed to pytest by the runner."""

    def test_default_quick_pass(self, monkeypatch):
        monkeypatch.chdir(ROOT)
        monkeypatch.setenv("MHSOLVE_HYPOTHESIS_PROFILE", "dev")
        assert run_tests.pytest_args([]) == ["-q", "--tb=short", "-m", "not slow", "tests/"]

    def test_all_with_explicit_file(self, monkeypatch):
        monkeypatch.chdir(ROOT)
        monkeypatch.setenv("MHSOLVE_HYPOTHESIS_PROFILE", "dev")
        args = run_tests.pytest_args(["--all", "tests/test_ring.py::TestPolynomials", "-x"])
        assert args == ["-q", "--tb=short", "tests/test_ring.py::TestPolynomials", "-x"]

    def test_profile_selection(self, monkeypatch):
        monkeypatch.chdir(ROOT)
        monkeypatch.setenv("MHSOLVE_HYPOTHESIS_PROFILE", "dev")
        args = run_tests.pytest_args(["--profile", "ci", "-v"])
        assert os.environ["MHSOLVE_HYPOTHESIS_PROFILE"] == "ci"
        assert args[-2:] == ["tests/", "-v"]
