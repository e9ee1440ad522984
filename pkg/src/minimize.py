"""
Minimizing the first coordinate on a real algebraic set.
Builds the Lagrange system (h, [L] jac(h, 1), u.L - 1), solves it over the
rationals, projects the critical points onto the X-space and isolates the
smallest real value of x_1 with sympy root isolation and interval arithmetic.
"""

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ as SYMPY_QQ
from sympy.polys.rootisolation import (
    dup_count_real_roots,
    dup_isolate_real_roots_sqf,
    dup_refine_real_root,
)
from sympy.polys.sqfreetools import dup_sqf_part

from .bounds import lagrange_bounds, lagrange_heights, lagrange_multidegrees
from .liftz import SolveOutcome, solve_over_z
from .ring import QQ, Poly, from_sympy_rational, poly_diff, poly_eval, poly_strip, to_dense, to_sympy_rational
from .slp import SLP, BlockStructure, MultiDegreeVector, SLPBuilder, slp_jacobian
from .zdp import LinearForm, ZeroDimParam

logger = logging.getLogger(__name__)

Interval = Tuple[Fraction, Fraction]


@dataclass(frozen=True)
class MinimizationProblem:
    """Minimize x_1 on V(h), h = (h_1, ..., h_p) in Z[X_1, ..., X_n]."""
    n: int
    p: int
    h: SLP
    d: int
    s: float

    def __post_init__(self):
        if not 1 <= self.p <= self.n:
            raise ValueError(f"need 1 <= p <= n, got n={self.n} p={self.p}")
        if self.h.n_inputs != self.n or self.h.n_outputs != self.p:
            raise ValueError("constraint program does not match (n, p)")
        if self.d < 1:
            raise ValueError("constraint degree must be at least 1")


@dataclass(frozen=True)
class LagrangeSystem:
    program: SLP
    blocks: BlockStructure
    degrees: MultiDegreeVector
    u: Tuple[int, ...]


@dataclass(frozen=True)
class ProjectedParam:
    """q and the X-coordinates v_1..v_n of a parametrization in (X, L)."""
    q: Poly
    v: Tuple[Poly, ...]
    lam: LinearForm

    @property
    def degree(self) -> int:
        return len(self.q) - 1


@dataclass
class CriticalPoints:
    full: Optional[ZeroDimParam]
    projected: Optional[ProjectedParam]
    u: Tuple[int, ...]
    solve: SolveOutcome


def build_lagrange_system(prob: MinimizationProblem, u: Sequence[int]) -> LagrangeSystem:
    """The square system in (X, L) whose solutions are the critical points of x_1 on V(h)."""
    n, p = prob.n, prob.p
    if len(u) != p or not any(u):
        raise ValueError("u must be a nonzero vector of length p")
    builder = SLPBuilder(n + p)
    X = [builder.input(i) for i in range(n)]
    L = [builder.input(n + l) for l in range(p)]
    hmap = builder.embed(prob.h, X)
    jac = slp_jacobian(prob.h)
    jmap = builder.embed(jac, X)
    outputs = [hmap[o] for o in prob.h.outputs]
    for k in range(1, n):
        terms = [builder.mul(L[l], jmap[jac.outputs[l * n + k]]) for l in range(p)]
        outputs.append(builder.sum(terms))
    affine = builder.sum([builder.mul(builder.const(c), L[l]) for l, c in enumerate(u)])
    outputs.append(builder.sub(affine, builder.const(1)))
    blocks = BlockStructure((n, p))
    program = builder.build(outputs, blocks)
    return LagrangeSystem(program, blocks, lagrange_multidegrees(n, p, prob.d), tuple(u))


def choose_u(p: int, delta: int, rng: random.Random) -> Tuple[int, ...]:
    """(1, i, ..., i^(p-1)) for a random i in 1..8(p-1)delta."""
    if p < 1 or delta < 1:
        raise ValueError("choose_u needs p >= 1 and delta >= 1")
    i = rng.randint(1, max(8 * (p - 1) * delta, 1))
    return tuple(i ** l for l in range(p))


def project(P: ZeroDimParam, n: int) -> ProjectedParam:
    return ProjectedParam(P.q, P.v[:n], P.lam)


def critical_points(
    prob: MinimizationProblem,
    seed: Optional[int] = None,
    repeat_k: int = 3,
    prime_override: Optional[int] = None,
    threads: int = 1,
) -> CriticalPoints:
    C, _ = lagrange_bounds(prob.n, prob.p, prob.d, prob.s)
    rng = random.Random(seed)
    u = choose_u(prob.p, max(C, 1), rng)
    system = build_lagrange_system(prob, u)
    heights = lagrange_heights(prob.n, prob.p, prob.d, prob.s)
    outcome = solve_over_z(
        system.program,
        system.degrees,
        heights,
        seed=rng.getrandbits(63),
        repeat_k=repeat_k,
        prime_override=prime_override,
        threads=threads,
    )
    if outcome.param is None:
        return CriticalPoints(None, None, u, outcome)
    logger.info("critical points: degree %d (bound %d)", outcome.param.degree, C)
    return CriticalPoints(outcome.param, project(outcome.param, prob.n), u, outcome)


# ---------------------------------------------------------------------------
# Real roots
# ---------------------------------------------------------------------------

def count_real_roots(q: Poly, inf: Optional[Fraction] = None, sup: Optional[Fraction] = None) -> int:
    """Distinct real roots of q in [inf, sup], by Sturm sequence."""
    q = poly_strip(q, QQ)
    if len(q) <= 1:
        return 0
    inf = None if inf is None else to_sympy_rational(inf)
    sup = None if sup is None else to_sympy_rational(sup)
    return dup_count_real_roots(dup_sqf_part(to_dense(q, QQ), SYMPY_QQ), SYMPY_QQ, inf=inf, sup=sup)


def isolate_real_roots(q: Poly) -> List[Interval]:
    """
    Disjoint intervals each holding exactly one real root of q, sorted.
    An interval (a, a) is an exact rational root.
    """
    q = poly_strip(q, QQ)
    if len(q) <= 1:
        return []
    f = dup_sqf_part(to_dense(q, QQ), SYMPY_QQ)
    boxes = sorted(
        (from_sympy_rational(a), from_sympy_rational(b))
        for a, b in dup_isolate_real_roots_sqf(f, SYMPY_QQ)
    )
    expected = count_real_roots(q)
    if len(boxes) != expected:
        raise ArithmeticError(f"isolated {len(boxes)} real roots, Sturm count is {expected}")
    return boxes


def refine_root(q: Poly, box: Interval, width: Fraction) -> Interval:
    """Shrink an isolating interval of the squarefree part of q below width."""
    a, b = box
    if a == b:
        return box
    f = dup_sqf_part(to_dense(q, QQ), SYMPY_QQ)
    s, t = dup_refine_real_root(f, to_sympy_rational(a), to_sympy_rational(b), SYMPY_QQ, eps=to_sympy_rational(width))
    s, t = from_sympy_rational(s), from_sympy_rational(t)
    return (s, t) if s <= t else (t, s)


def interval_eval(a: Poly, box: Interval) -> Interval:
    """Enclosure of a over box by interval Horner."""
    lo = hi = Fraction(0)
    for c in reversed(a):
        products = (lo * box[0], lo * box[1], hi * box[0], hi * box[1])
        lo, hi = min(products) + c, max(products) + c
    return lo, hi


def _interval_div(num: Interval, den: Interval) -> Interval:
    quotients = [x / y for x in num for y in den]
    return min(quotients), max(quotients)


def coordinate_enclosure(q: Poly, v: Poly, box: Interval, sigma: int) -> Interval:
    """Enclosure of v(tau)/q'(tau) of width <= 2^-sigma, tau the root of q in box."""
    dq = poly_diff(q, QQ)
    width = Fraction(1, 2 ** sigma)
    while True:
        if box[0] == box[1]:
            value = poly_eval(v, box[0], QQ) / poly_eval(dq, box[0], QQ)
            return value, value
        den = interval_eval(dq, box)
        if den[0] > 0 or den[1] < 0:
            enclosure = _interval_div(interval_eval(v, box), den)
            if enclosure[1] - enclosure[0] <= width:
                return enclosure
        box = refine_root(q, box, (box[1] - box[0]) / 2)


def isolate_minimum(P, sigma: int) -> Optional[Interval]:
    """
    Interval of width <= 2^-sigma holding the smallest real value of
    x_1 = v_1 / q' over the real roots of q; None without real roots.
    """
    q = tuple(Fraction(c) for c in P.q)
    v1 = tuple(Fraction(c) for c in P.v[0])
    boxes = isolate_real_roots(q)
    if not boxes:
        return None
    enclosures = [coordinate_enclosure(q, v1, box, sigma) for box in boxes]
    logger.debug("isolated %d real critical points", len(boxes))
    return min(lo for lo, _ in enclosures), min(hi for _, hi in enclosures)
