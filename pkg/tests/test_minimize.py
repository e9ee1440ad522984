"""
Tests for minimize.py
"""

import math
import random
from fractions import Fraction

import pytest

from src.bounds import lagrange_multidegrees
from src.minimize import (
    MinimizationProblem,
    ProjectedParam,
    build_lagrange_system,
    choose_u,
    coordinate_enclosure,
    count_real_roots,
    critical_points,
    interval_eval,
    isolate_minimum,
    isolate_real_roots,
    project,
    refine_root,
)
from src.ring import QQ, poly_convert, poly_eval, poly_from_roots
from src.slp import BlockStructure, slp_eval, slp_from_polynomials
from src.zdp import ZeroDimParam, coordinates_at

from tests.conftest import sphere_terms


def qq(*coeffs):
    return poly_convert(coeffs, QQ)


def sphere(n):
    h = slp_from_polynomials([sphere_terms(n)], n)
    return MinimizationProblem(n, 1, h, 2, 0.0)


def ellipse():
    # x1^2 + 4 x2^2 - 4
    h = slp_from_polynomials([{(2, 0): 1, (0, 2): 4, (0, 0): -4}], 2)
    return MinimizationProblem(2, 1, h, 2, math.log(4))


# T^2 + T - 2 = (T - 1)(T + 2), with x_1 = T
LINE_Q = qq(-2, 1, 1)
LINE_V = qq(4, -1)


class TestProblem:
    """Validation of the problem data."""

    def test_valid(self):
        prob = sphere(3)
        assert prob.n == 3
        assert prob.p == 1

    def test_too_many_constraints(self):
        h = slp_from_polynomials([sphere_terms(2)] * 3, 2)
        with pytest.raises(ValueError):
            MinimizationProblem(2, 3, h, 2, 0.0)

    def test_program_mismatch(self):
        h = slp_from_polynomials([sphere_terms(3)], 3)
        with pytest.raises(ValueError):
            MinimizationProblem(4, 1, h, 2, 0.0)

    def test_degree_zero(self):
        h = slp_from_polynomials([sphere_terms(3)], 3)
        with pytest.raises(ValueError):
            MinimizationProblem(3, 1, h, 0, 0.0)


class TestLagrangeSystem:
    """The square system (h, L jac(h, 1), u.L - 1)."""

    def test_outputs(self):
        system = build_lagrange_system(sphere(3), (1,))
        # (x1^2 + x2^2 + x3^2 - 1, 2 L x2, 2 L x3, L - 1) at (1, 2, 3, 5)
        assert slp_eval(system.program, (1, 2, 3, 5), QQ) == (13, 20, 30, 4)

    def test_affine_equation_uses_u(self):
        system = build_lagrange_system(sphere(3), (3,))
        assert slp_eval(system.program, (1, 2, 3, 5), QQ)[-1] == 14

    def test_structure(self):
        system = build_lagrange_system(sphere(3), (1,))
        assert system.blocks == BlockStructure((3, 1))
        assert system.degrees == lagrange_multidegrees(3, 1, 2)
        assert tuple(system.degrees) == ((2, 0), (1, 1), (1, 1), (0, 1))
        assert system.program.n_inputs == 4
        assert system.program.n_outputs == 4

    def test_critical_points_vanish(self):
        system = build_lagrange_system(ellipse(), (1,))
        assert slp_eval(system.program, (2, 0, 1), QQ) == (0, 0, 0)
        assert slp_eval(system.program, (-2, 0, 1), QQ) == (0, 0, 0)

    def test_bad_u(self):
        with pytest.raises(ValueError):
            build_lagrange_system(sphere(3), (0,))
        with pytest.raises(ValueError):
            build_lagrange_system(sphere(3), (1, 1))


class TestChooseU:
    """The random vector u in the affine equation."""

    def test_single_constraint(self):
        assert choose_u(1, 5, random.Random(0)) == (1,)

    def test_powers(self):
        u = choose_u(3, 2, random.Random(7))
        i = u[1]
        assert 1 <= i <= 32
        assert u == (1, i, i * i)

    def test_invalid(self):
        with pytest.raises(ValueError):
            choose_u(0, 5, random.Random(0))


class TestProjection:
    """Dropping the multiplier coordinates."""

    def test_project(self):
        P = ZeroDimParam(qq(-1, 0, 1), (qq(0, 1), qq(), qq(1)), (1, 0, 2), QQ)
        projected = project(P, 2)
        assert projected.q == P.q
        assert projected.v == (qq(0, 1), qq())
        assert projected.lam == (1, 0, 2)
        assert projected.degree == 2


class TestRealRoots:
    """Sturm counts, root isolation and refinement."""

    def test_sturm_count(self):
        assert count_real_roots(qq(-2, 0, 1)) == 2
        assert count_real_roots(qq(-2, 0, 1), inf=Fraction(0)) == 1
        assert count_real_roots(qq(1, 0, 1)) == 0
        assert count_real_roots(poly_from_roots([1, 1, -2], QQ)) == 2

    def test_isolate_exact_roots(self):
        boxes = isolate_real_roots(qq(0, -1, 0, 1))
        assert len(boxes) == 3
        for (a, b), root in zip(boxes, (-1, 0, 1)):
            assert a <= root <= b

    def test_isolate_repeated_root(self):
        boxes = isolate_real_roots(poly_from_roots([1, 1, -2], QQ))
        assert len(boxes) == 2
        assert boxes[0][0] <= -2 <= boxes[0][1]
        assert boxes[1][0] <= 1 <= boxes[1][1]

    def test_refine_root(self):
        q = qq(-2, 0, 1)
        box = isolate_real_roots(q)[1]
        a, b = refine_root(q, box, Fraction(1, 1000))
        assert b - a < Fraction(1, 1000)
        assert 0 < a and a * a <= 2 <= b * b
        assert box[0] <= a and b <= box[1]

    def test_isolate_sqrt2(self):
        boxes = isolate_real_roots(qq(-2, 0, 1))
        assert len(boxes) == 2
        (a0, b0), (a1, b1) = boxes
        assert a0 < b0 <= a1 < b1
        assert all(poly_eval(qq(-2, 0, 1), a, QQ) * poly_eval(qq(-2, 0, 1), b, QQ) < 0 for a, b in boxes)

    def test_no_real_roots(self):
        assert isolate_real_roots(qq(1, 0, 1)) == []

    def test_constant(self):
        assert isolate_real_roots(qq(5)) == []

    def test_roots_inside(self):
        boxes = isolate_real_roots(LINE_Q)
        assert len(boxes) == 2
        assert boxes[0][0] <= -2 <= boxes[0][1]
        assert boxes[1][0] <= 1 <= boxes[1][1]

    def test_interval_eval(self):
        assert interval_eval(qq(-2, 0, 1), (Fraction(1), Fraction(2))) == (-1, 2)

    def test_enclosure_at_exact_root(self):
        assert coordinate_enclosure(LINE_Q, LINE_V, (Fraction(1), Fraction(1)), 10) == (1, 1)


class TestIsolateMinimum:
    """Enclosures of the smallest real value of x_1."""

    def test_line(self):
        lo, hi = isolate_minimum(ProjectedParam(LINE_Q, (LINE_V,), (1,)), 20)
        assert lo <= -2 <= hi
        assert hi - lo <= Fraction(1, 2 ** 20)

    def test_nested_as_sigma_grows(self):
        P = ProjectedParam(LINE_Q, (LINE_V,), (1,))
        coarse = isolate_minimum(P, 5)
        fine = isolate_minimum(P, 25)
        assert coarse[0] <= fine[0] <= -2 <= fine[1] <= coarse[1]
        assert fine[1] - fine[0] <= coarse[1] - coarse[0]

    def test_irrational_minimum(self):
        # x_1 = T on the roots of T^2 - 2
        P = ProjectedParam(qq(-2, 0, 1), (qq(4),), (1,))
        lo, hi = isolate_minimum(P, 30)
        assert hi - lo <= Fraction(1, 2 ** 30)
        assert lo <= -Fraction(14142135, 10 ** 7)
        assert hi >= -Fraction(14142136, 10 ** 7)

    def test_no_real_points(self):
        assert isolate_minimum(ProjectedParam(qq(1, 0, 1), (qq(0, 2),), (1,)), 10) is None


class TestCriticalPoints:
    """End to end: Lagrange system solved over Q, then the minimum isolated."""

    def test_sphere(self):
        found = critical_points(sphere(3), seed=3, repeat_k=2)
        assert found.u == (1,)
        assert found.full is not None
        assert found.full.N == 4
        assert found.projected.degree == 2
        lo, hi = isolate_minimum(found.projected, 30)
        assert lo <= -1 <= hi
        assert hi - lo <= Fraction(1, 2 ** 30)

    def test_ellipse(self):
        found = critical_points(ellipse(), seed=11, repeat_k=2)
        assert found.projected.degree == 2
        lo, hi = isolate_minimum(found.projected, 20)
        assert lo <= -2 <= hi
        assert found.projected.v == found.full.v[:2]
        lam = found.full.lam
        taus = [sum(c * x for c, x in zip(lam, point)) for point in ((2, 0, 1), (-2, 0, 1))]
        assert found.full.q == poly_from_roots(taus, QQ)
        assert {coordinates_at(found.full, tau)[:2] for tau in taus} == {(2, 0), (-2, 0)}

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_sphere_family(self, n):
        prob = sphere(n)
        found = critical_points(prob, seed=n, repeat_k=2)
        assert found.full is not None
        assert found.full.degree <= math.comb(n - 1, prob.p - 1) * prob.d ** prob.p * (prob.d - 1) ** (n - prob.p)
        lo, hi = isolate_minimum(found.projected, 20)
        assert lo <= -1 <= hi
        assert hi - lo <= Fraction(1, 2 ** 20)

    def test_weighted_quadric(self):
        # x1^2 + 2 x2^2 + 3 x3^2 = 6, minimum -sqrt(6)
        h = slp_from_polynomials([{(2, 0, 0): 1, (0, 2, 0): 2, (0, 0, 2): 3, (0, 0, 0): -6}], 3)
        prob = MinimizationProblem(3, 1, h, 2, math.log(6))
        found = critical_points(prob, seed=4, repeat_k=2)
        assert found.full.degree <= 2
        lo, hi = isolate_minimum(found.projected, 30)
        assert hi - lo <= Fraction(1, 2 ** 30)
        assert lo < 0 and lo * lo >= 6
        assert hi >= 0 or hi * hi <= 6
        assert hi < Fraction(-24494897, 10 ** 7)
