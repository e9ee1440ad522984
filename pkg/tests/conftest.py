"""Shared fixtures: the three-equation bilinear example system and friends."""

import math
import os
from fractions import Fraction

import pytest
from hypothesis import settings

from src.slp import BlockStructure, MultiDegreeVector, slp_from_polynomials

settings.register_profile("dev", max_examples=25, deadline=None)
settings.register_profile("ci", max_examples=200, deadline=None)
settings.load_profile(os.environ.get("MHSOLVE_HYPOTHESIS_PROFILE", "dev"))


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: exhaustive-search and random-system suites")


# f1 = -16 x11 x21 + 8 x11
# f2 = -8 x11 x21 - 16 x11 x22 - 4 x11
# f3 = 3 x11 x21 + 4 x11 x22 + x11 + 2 x21 + 4
EX37_POLYS = (
    {(1, 1, 0): -16, (1, 0, 0): 8},
    {(1, 1, 0): -8, (1, 0, 1): -16, (1, 0, 0): -4},
    {(1, 1, 0): 3, (1, 0, 1): 4, (1, 0, 0): 1, (0, 1, 0): 2, (0, 0, 0): 4},
)
EX37_BLOCKS = BlockStructure((1, 2))
EX37_DEGREES = MultiDegreeVector(((1, 1),) * 3)
EX37_HEIGHTS = (math.log(16), math.log(16), math.log(4))
EX37_LAMBDA = (1, 2, 4)
EX37_START_ROOTS = {(-2, 0, -1), (-1, 0, -2), (0, 2, -3)}
EX37_SOLUTION = (Fraction(-10), Fraction(1, 2), Fraction(-1, 2))
EX37_SINGULAR = (0, -2, 1)


@pytest.fixture
def ex37():
    """(program, blocks, degrees) of the example system."""
    program = slp_from_polynomials(EX37_POLYS, 3, EX37_BLOCKS)
    return program, EX37_BLOCKS, EX37_DEGREES


@pytest.fixture
def ex37_file(tmp_path):
    path = tmp_path / "ex37.json"
    path.write_text(
        '{"blocks": [{"name": "X1", "vars": ["x11"]}, {"name": "X2", "vars": ["x21", "x22"]}],\n'
        ' "polys": ["-16*x11*x21 + 8*x11", "-8*x11*x21 - 16*x11*x22 - 4*x11",\n'
        '           "3*x11*x21 + 4*x11*x22 + x11 + 2*x21 + 4"]}\n',
        encoding="utf-8",
    )
    return path


def sphere_terms(n: int):
    """X_1^2 + ... + X_n^2 - 1."""
    terms = {tuple(2 if k == i else 0 for k in range(n)): 1 for i in range(n)}
    terms[(0,) * n] = -1
    return terms
