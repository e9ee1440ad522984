"""
Multi-homogeneous degree and height bounds.
Bezout numbers are coefficient sums of products of linear forms in the
truncated Chow ring Z[theta_1..theta_m]/(theta_j^(n_j+1)); height bounds
use the same ring augmented by a square-zero variable zeta. Degree parts
are exact integers, height parts are floats rounded upward.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np

from .errors import ChowArrayTooLarge
from .slp import BlockStructure, MultiDegreeVector

logger = logging.getLogger(__name__)

MAX_CHOW_ENTRIES = 1 << 24
_SLACK = 1.0 + 2.0 ** -40


def _up(x: float) -> float:
    """Round a nonnegative float upward with multiplicative slack."""
    return math.nextafter(x * _SLACK, math.inf)


def _up_array(a: np.ndarray) -> np.ndarray:
    return np.nextafter(a * _SLACK, np.inf)


def _log(x: float) -> float:
    return _up(math.log(x))


def _upsum(values: Iterable[float]) -> float:
    return _up(math.fsum(values))


@dataclass(frozen=True, eq=False)
class TruncatedChowPoly:
    """Dense element of Z[theta]/(theta_j^(n_j+1)), indexed by exponent tuples."""
    sizes: Tuple[int, ...]
    coeffs: np.ndarray

    @classmethod
    def one(cls, sizes: Sequence[int], dtype=object) -> "TruncatedChowPoly":
        shape = tuple(n + 1 for n in sizes)
        entries = math.prod(shape)
        if entries > MAX_CHOW_ENTRIES:
            raise ChowArrayTooLarge(f"{entries} Chow ring coefficients exceed the cap {MAX_CHOW_ENTRIES}")
        coeffs = np.zeros(shape, dtype=dtype)
        coeffs[(0,) * len(shape)] = 1
        return cls(tuple(sizes), coeffs)

    def times_linear(self, weights: Sequence) -> "TruncatedChowPoly":
        """Multiply by sum_j weights[j] theta_j, dropping theta_j^(n_j+1)."""
        out = np.zeros_like(self.coeffs)
        m = len(self.sizes)
        for axis, w in enumerate(weights):
            if w == 0:
                continue
            src = [slice(None)] * m
            dst = [slice(None)] * m
            src[axis] = slice(0, -1)
            dst[axis] = slice(1, None)
            out[tuple(dst)] += w * self.coeffs[tuple(src)]
        return TruncatedChowPoly(self.sizes, out)

    def coefficient(self, exponents: Sequence[int]):
        return self.coeffs[tuple(exponents)]

    def coefficient_sum(self):
        if self.coeffs.dtype == object:
            return sum(self.coeffs.flat)
        return _upsum(self.coeffs.flat)


@dataclass(frozen=True, eq=False)
class HeightAugmentedChowPoly:
    """a + zeta b with zeta^2 = 0; a exact, b an upward-rounded float array."""
    deg: TruncatedChowPoly
    ht: TruncatedChowPoly

    @classmethod
    def one(cls, sizes: Sequence[int]) -> "HeightAugmentedChowPoly":
        deg = TruncatedChowPoly.one(sizes)
        ht = TruncatedChowPoly(deg.sizes, np.zeros(deg.coeffs.shape, dtype=float))
        return cls(deg, ht)

    def times(self, eta: float, weights: Sequence[int]) -> "HeightAugmentedChowPoly":
        """Multiply by eta zeta + sum_j weights[j] theta_j."""
        deg = self.deg.times_linear(weights)
        shifted = _up_array(self.ht.times_linear(weights).coeffs)
        if eta:
            shifted = _up_array(shifted + _up_array(eta * self.deg.coeffs.astype(float)))
        return HeightAugmentedChowPoly(deg, TruncatedChowPoly(self.deg.sizes, shifted))

    def total(self) -> float:
        """Sum of all coefficients of both parts."""
        return _upsum([float(self.deg.coefficient_sum()), self.ht.coefficient_sum()])


def bezout_number(blocks: BlockStructure, degrees: MultiDegreeVector) -> int:
    """C_n(d): coefficient sum of prod_i (d_i1 theta_1 + ... + d_im theta_m)."""
    degrees.check_against(blocks)
    chow = TruncatedChowPoly.one(blocks.sizes)
    for row in degrees:
        if not any(row):
            return 0
        chow = chow.times_linear(row)
    return int(chow.coefficient_sum())


def homotopy_bezout_number(blocks: BlockStructure, degrees: MultiDegreeVector) -> int:
    """C_n'(d') with an extra block of size one for t and d'_i = (1, d_i)."""
    degrees.check_against(blocks)
    chow = TruncatedChowPoly.one((1,) + blocks.sizes)
    for row in degrees:
        chow = chow.times_linear((1,) + tuple(row))
    return int(chow.coefficient_sum())


def height_bound(blocks: BlockStructure, beta: Sequence[float], degrees: MultiDegreeVector) -> float:
    """H_n(beta, d): coefficient sum of prod_i (beta_i zeta + d_i . theta), rounded upward."""
    degrees.check_against(blocks)
    if len(beta) != degrees.M:
        raise ValueError("beta and the multi-degrees have different lengths")
    if any(b < 0 for b in beta):
        raise ValueError("beta must be nonnegative")
    chow = HeightAugmentedChowPoly.one(blocks.sizes)
    for eta, row in zip(beta, degrees):
        chow = chow.times(float(eta), row)
    return chow.total()


def beta_vector(heights: Sequence[float], blocks: BlockStructure, degrees: MultiDegreeVector) -> Tuple[float, ...]:
    """beta_i = s_i + sum_j log(n_j + 1) d_ij."""
    degrees.check_against(blocks, square=False)
    logs = [_log(n + 1) for n in blocks.sizes]
    return tuple(
        _upsum([float(s)] + [_up(lg * d) for lg, d in zip(logs, row) if d])
        for s, row in zip(heights, degrees)
    )


@dataclass(frozen=True)
class LiftingLedger:
    """Parameters of the p-adic solver: mu_1..mu_3, H, H', e and the prime range B."""
    mu1: float
    mu2: float
    mu3: float
    H: float
    Hprime: float
    e: int
    B: int
    C: int
    height: float

    def to_dict(self) -> Dict:
        return {
            "mu1": self.mu1,
            "mu2": self.mu2,
            "mu3": self.mu3,
            "H": self.H,
            "Hprime": self.Hprime,
            "e": self.e,
            "B": self.B,
        }


def lifting_ledger(blocks: BlockStructure, degrees: MultiDegreeVector, heights: Sequence[float]) -> LiftingLedger:
    degrees.check_against(blocks)
    N = blocks.N
    C = bezout_number(blocks, degrees)
    beta = beta_vector(heights, blocks, degrees)
    Hn = height_bound(blocks, beta, degrees)
    s = max(float(x) for x in heights)
    d_total = degrees.max_total_degree
    c_log = max(C, 1)  # logarithms of C are taken as 0 when C = 0

    mu1 = _up(N * _log(8 * N * c_log * c_log))
    mu2 = _upsum([Hn, _up(2 * _log(N + 1) * C)])
    mu3 = _upsum([mu2, _up(mu1 * C), _up(_log(N + 2) * C), _up((N + 1) * _log(c_log))])
    H = _up(6 * N * (d_total + 1) * C * _upsum([mu3, s, _up(_log(N + 1) * C)]))
    Hprime = _upsum([Hn, _up(_upsum([mu1, 4 * _log(N + 2)]) * C)])
    e = degrees.max_column_sum
    B = max(8 * math.ceil(H), e)
    logger.debug("ledger: C=%d H=%.3f H'=%.3f e=%d", C, H, Hprime, e)
    return LiftingLedger(mu1, mu2, mu3, H, Hprime, e, B, C, Hn)


def output_height_bound(blocks: BlockStructure, degrees: MultiDegreeVector, beta: Sequence[float], b: float) -> float:
    """H_n(beta, d) + (b + 4 log(N + 2)) C_n(d)."""
    if b < 0:
        raise ValueError("form height must be nonnegative")
    C = bezout_number(blocks, degrees)
    Hn = height_bound(blocks, beta, degrees)
    return _upsum([Hn, _up(_upsum([b, 4 * _log(blocks.N + 2)]) * C)])


def uniform_bezout_number(blocks: BlockStructure, degree: Sequence[int]) -> int:
    """d_1^n_1 ... d_m^n_m N! / (n_1! ... n_m!)."""
    out = math.factorial(blocks.N)
    for n in blocks.sizes:
        out //= math.factorial(n)
    for n, d in zip(blocks.sizes, degree):
        out *= d ** n
    return out


def uniform_height_estimate(blocks: BlockStructure, degree: Sequence[int], s: float) -> float:
    """m (s + d_1 + ... + d_m + 1) times the uniform Bezout number."""
    return _up(blocks.m * (s + sum(degree) + 1) * uniform_bezout_number(blocks, degree))


def lagrange_multidegrees(n: int, p: int, d: int) -> MultiDegreeVector:
    """p copies of (d, 0), n - 1 copies of (d - 1, 1), one (0, 1)."""
    return MultiDegreeVector(((d, 0),) * p + ((d - 1, 1),) * (n - 1) + ((0, 1),))


def lagrange_closed_form(n: int, p: int, d: int) -> int:
    return math.comb(n - 1, p - 1) * d ** p * (d - 1) ** (n - p)


def lagrange_heights(n: int, p: int, d: int, s: float) -> Tuple[float, ...]:
    """Heights of h, of the bilinear rows and of the affine equation u.L - 1."""
    C = max(lagrange_closed_form(n, p, d), 1)
    row = _upsum([s, _log(n), _log(d)])
    affine = _up(p * _log(8 * p * C))
    return (float(s),) * p + (row,) * (n - 1) + (affine,)


def lagrange_bounds(n: int, p: int, d: int, s: float) -> Tuple[int, float]:
    """(C, H) for the Lagrange system on blocks (n, p)."""
    if not 1 <= p <= n or d < 1:
        raise ValueError(f"need 1 <= p <= n and d >= 1, got n={n} p={p} d={d}")
    blocks = BlockStructure((n, p))
    degrees = lagrange_multidegrees(n, p, d)
    C = lagrange_closed_form(n, p, d)
    checked = bezout_number(blocks, degrees)
    if checked != C:
        raise ArithmeticError(f"Lagrange Bezout number mismatch: {C} != {checked}")
    beta = beta_vector(lagrange_heights(n, p, d, s), blocks, degrees)
    return C, height_bound(blocks, beta, degrees)


def lagrange_height_closed_form(n: int, p: int, d: int, s: float) -> float:
    """d^p (d-1)^(n-p) max(eta_1, eta_2 + 1, eta_3) (n + 2) binom(n, p)."""
    C = max(lagrange_closed_form(n, p, d), 1)
    eta1 = _upsum([s, _up(d * _log(n + 1))])
    eta2 = _upsum([s, _log(n), _log(d), _up((d - 1) * _log(n + 1)), _log(p + 1)])
    eta3 = _upsum([_up(p * _log(8 * p * C)), _log(p + 1)])
    return _up(d ** p * (d - 1) ** (n - p) * max(eta1, eta2 + 1, eta3) * (n + 2) * math.comb(n, p))


def poly_height(coeffs: Iterable) -> float:
    """max(log D, log |D c|) over the nonzero coefficients c, D the common denominator."""
    values = [Fraction(c) for c in coeffs if c]
    if not values:
        return 0.0
    D = math.lcm(*(c.denominator for c in values))
    return max([math.log(D)] + [math.log(abs(c.numerator) * (D // c.denominator)) for c in values])


def form_height(lam: Sequence[int]) -> float:
    return max((math.log(abs(c)) for c in lam if c), default=0.0)


@dataclass(frozen=True)
class BoundReport:
    """Everything the bounds command prints."""
    C: int
    Cprime: int
    Hn: float
    beta: Tuple[float, ...]
    ledger: LiftingLedger
    uniform: Optional[Dict] = field(default=None)

    def to_dict(self) -> Dict:
        out = {
            "C": self.C,
            "Cprime": self.Cprime,
            "H": self.ledger.H,
            "Hprime": self.ledger.Hprime,
            "Hn": self.Hn,
            "B": self.ledger.B,
            "beta": list(self.beta),
            "ledger": self.ledger.to_dict(),
        }
        if self.uniform is not None:
            out["uniform"] = self.uniform
        return out


def bound_report(blocks: BlockStructure, degrees: MultiDegreeVector, heights: Sequence[float]) -> BoundReport:
    ledger = lifting_ledger(blocks, degrees, heights)
    beta = beta_vector(heights, blocks, degrees)
    uniform = None
    if len(set(degrees.degrees)) == 1:
        row = degrees[0]
        uniform = {
            "C": uniform_bezout_number(blocks, row),
            "H_estimate": uniform_height_estimate(blocks, row, max(heights)),
        }
    return BoundReport(
        C=ledger.C,
        Cprime=homotopy_bezout_number(blocks, degrees),
        Hn=ledger.height,
        beta=beta,
        ledger=ledger,
        uniform=uniform,
    )
