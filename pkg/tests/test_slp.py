"""
Tests for slp.py
"""

import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from src.errors import SingularSystem
from src.ring import QQ, ZZ, PrimeField, poly_gcd
from src.slp import (
    SLP,
    BlockStructure,
    Instr,
    MultiDegreeVector,
    Op,
    SLPBuilder,
    adjugate_solve,
    berkowitz_charpoly,
    berkowitz_det,
    homotopy_combine,
    jacobian_det_in_quotient,
    slp_eval,
    slp_eval_in_quotient,
    slp_from_polynomials,
    slp_gradient,
    slp_jacobian,
    slp_reduce_mod_p,
    solve_with_unit_det,
)
from src.zdp import ZeroDimParam

from tests.conftest import EX37_LAMBDA, EX37_POLYS, EX37_SINGULAR, EX37_SOLUTION


def xy_program():
    b = SLPBuilder(2)
    return b.build([b.mul(b.input(0), b.input(1))])


class TestStructures:
    """Test blocks, multi-degrees and program validation."""

    def test_block_structure(self):
        blocks = BlockStructure((1, 2))
        assert blocks.m == 2 and blocks.N == 3
        assert blocks.offsets == (0, 1)
        assert list(blocks.variables(1)) == [1, 2]

    def test_block_sizes_positive(self):
        with pytest.raises(ValueError):
            BlockStructure((1, 0))

    def test_multidegree_vector(self):
        d = MultiDegreeVector(((1, 1), (2, 0), (0, 1)))
        assert d.M == 3 and d.m == 2
        assert d.column_sums == (3, 2)
        assert d.max_column_sum == 3
        assert d.max_total_degree == 2

    def test_multidegree_check(self):
        d = MultiDegreeVector(((1, 1),) * 2)
        with pytest.raises(ValueError):
            d.check_against(BlockStructure((1, 2)))
        d.check_against(BlockStructure((1, 2)), square=False)

    def test_rejects_forward_reference(self):
        with pytest.raises(ValueError):
            SLP(1, (Instr(Op.INPUT, 0), Instr(Op.ADD, 0, 2)), (1,))

    def test_rejects_missing_input(self):
        with pytest.raises(ValueError):
            SLP(1, (Instr(Op.INPUT, 1),), (0,))

    def test_constant_height(self, ex37):
        program, _, _ = ex37
        assert program.constant_height == pytest.approx(math.log(16))


class TestBuilder:
    """Test constant folding and caching."""

    def test_folds_constants(self):
        b = SLPBuilder(1)
        ref = b.add(b.const(2), b.mul(b.const(3), b.const(4)))
        assert b.value(ref) == 14

    def test_peepholes(self):
        b = SLPBuilder(1)
        x = b.input(0)
        assert b.mul(x, b.const(1)) == x
        assert b.add(b.const(0), x) == x
        assert b.value(b.mul(x, b.const(0))) == 0

    def test_input_cache(self):
        b = SLPBuilder(2)
        assert b.input(1) == b.input(1)

    def test_empty_program(self):
        prog = SLPBuilder(0).build([])
        assert prog.size == 1 and prog.n_outputs == 0


class TestEvaluation:
    """Test evaluation over several domains."""

    def test_example_vanishes_at_solution(self, ex37):
        program, _, _ = ex37
        assert slp_eval(program, EX37_SOLUTION, QQ) == (0, 0, 0)

    def test_example_vanishes_at_singular_point(self, ex37):
        program, _, _ = ex37
        assert slp_eval(program, EX37_SINGULAR, QQ) == (0, 0, 0)

    def test_no_constants_at_zero(self):
        assert slp_eval(xy_program(), (0, 0), ZZ) == (0,)

    def test_wrong_arity(self):
        with pytest.raises(ValueError):
            slp_eval(xy_program(), (1,), ZZ)


class TestDerivatives:
    """Test reverse-mode differentiation."""

    def test_gradient_of_product(self):
        grad = slp_gradient(xy_program())
        assert slp_eval(grad, (3, 5), ZZ) == (5, 3)

    def test_partial_of_third_equation(self, ex37):
        program, _, _ = ex37
        jac = slp_jacobian(program)
        entries = slp_eval(jac, (-10, 0, 0), ZZ)
        assert entries[2 * 3 + 1] == -28  # d f3 / d x21 = 3 x11 + 2

    def test_constant_program(self):
        b = SLPBuilder(2)
        grad = slp_gradient(b.build([b.const(7)]))
        assert slp_eval(grad, (4, 9), ZZ) == (0, 0)

    def test_gradient_needs_single_output(self, ex37):
        program, _, _ = ex37
        with pytest.raises(ValueError):
            slp_gradient(program)

    @settings(max_examples=60, deadline=None)
    @given(st.data())
    def test_matches_symbolic_differentiation(self, data):
        n = data.draw(st.integers(1, 4))
        exponent = st.tuples(*[st.integers(0, 3)] * n).filter(lambda e: sum(e) <= 3)
        terms = data.draw(st.dictionaries(exponent, st.integers(-9, 9), max_size=6))
        point = data.draw(st.tuples(*[st.integers(-5, 5)] * n))

        xs = sympy.symbols(f"x0:{n}")
        expr = sum((c * sympy.prod([x ** e for x, e in zip(xs, exps)]) for exps, c in terms.items()), sympy.Integer(0))
        prog = slp_from_polynomials([terms], n)
        assert slp_eval(prog, point, ZZ)[0] == expr.subs(dict(zip(xs, point)))
        grad = slp_eval(slp_gradient(prog), point, ZZ)
        for k in range(n):
            assert grad[k] == sympy.diff(expr, xs[k]).subs(dict(zip(xs, point)))


class TestHomotopyAndReduction:
    """Test homotopy combination and reduction modulo p."""

    def test_homotopy_endpoints(self, ex37):
        f, _, _ = ex37
        g = slp_from_polynomials([{(1, 0, 0): 1}, {(0, 1, 0): 1}, {(0, 0, 1): 1, (0, 0, 0): 2}], 3)
        h = homotopy_combine(f, g)
        x = (3, -1, 2)
        assert h.block_structure.sizes == (1, 1, 2)
        assert slp_eval(h, (0,) + x, ZZ) == slp_eval(g, x, ZZ)
        assert slp_eval(h, (1,) + x, ZZ) == slp_eval(f, x, ZZ)

    def test_homotopy_of_equal_programs(self, ex37):
        f, _, _ = ex37
        h = homotopy_combine(f, f)
        x = (2, 5, -3)
        assert slp_eval(h, (7,) + x, ZZ) == slp_eval(f, x, ZZ)

    def test_homotopy_arity_mismatch(self, ex37):
        f, _, _ = ex37
        with pytest.raises(ValueError):
            homotopy_combine(f, xy_program())

    def test_reduce_constant(self):
        b = SLPBuilder(1)
        prog = slp_reduce_mod_p(b.build([b.mul(b.const(8), b.input(0))]), 5)
        assert prog.constants == (3,)

    def test_reduce_keeps_small_constants(self):
        b = SLPBuilder(1)
        prog = b.build([b.add(b.mul(b.const(3), b.input(0)), b.const(5))])
        assert slp_reduce_mod_p(prog, 7).constants == (3, 5)

    def test_reduced_example_vanishes(self, ex37):
        f, _, _ = ex37
        K = PrimeField(10007)
        half = (10007 + 1) // 2
        point = (-10 % 10007, half, -half % 10007)
        assert slp_eval(slp_reduce_mod_p(f, 10007), point, K) == (0, 0, 0)


class TestLinearAlgebra:
    """Test division-free determinants and solves."""

    MATRIX = [[2, -1, 0], [3, 4, 5], [1, 0, -6]]

    def test_charpoly(self):
        expected = sympy.Matrix(self.MATRIX).charpoly().all_coeffs()
        assert berkowitz_charpoly(self.MATRIX, ZZ) == [int(c) for c in expected]

    def test_det(self):
        assert berkowitz_det(self.MATRIX, ZZ) == sympy.Matrix(self.MATRIX).det()
        assert berkowitz_det([], ZZ) == 1

    def test_adjugate_solve(self):
        rhs = [1, -2, 3]
        det, y = adjugate_solve(self.MATRIX, rhs, ZZ)
        A = sympy.Matrix(self.MATRIX)
        assert list(A * sympy.Matrix(y)) == [det * r for r in rhs]

    def test_unit_det_solve(self):
        x = solve_with_unit_det(self.MATRIX, [1, -2, 3], QQ)
        A = sympy.Matrix(self.MATRIX)
        assert list(A * sympy.Matrix([sympy.Rational(c.numerator, c.denominator) for c in x])) == [1, -2, 3]

    def test_singular_solve(self):
        with pytest.raises(SingularSystem):
            solve_with_unit_det([[1, 2], [2, 4]], [1, 1], QQ)


class TestQuotientEvaluation:
    """Test evaluation at a parametrized point."""

    def test_residues_vanish_at_final_point(self, ex37):
        f, _, _ = ex37
        w = tuple((c,) for c in EX37_SOLUTION)
        assert slp_eval_in_quotient(f, (QQ.convert(11), QQ.one), w, QQ) == ((), (), ())

    def test_jacobian_residue_at_final_point(self, ex37):
        f, _, _ = ex37
        P = ZeroDimParam((Fraction(11), Fraction(1)), tuple((c,) for c in EX37_SOLUTION), EX37_LAMBDA, QQ)
        assert jacobian_det_in_quotient(f, P) == (12800,)

    def test_jacobian_residue_detects_singular_root(self, ex37):
        f, _, _ = ex37
        r = (Fraction(0), Fraction(11), Fraction(1))
        w = (
            (Fraction(0), Fraction(-10)),
            (Fraction(-22), Fraction(-3, 2)),
            (Fraction(11), Fraction(1, 2)),
        )
        D = jacobian_det_in_quotient(f, ZeroDimParam(r, w, EX37_LAMBDA, QQ))
        assert poly_gcd(r, D, QQ) == (0, 1)
