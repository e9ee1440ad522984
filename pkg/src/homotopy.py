"""
Symbolic homotopy over a field.
Builds the multi-homogeneous start system, lifts its roots along
t f + (1 - t) g as power series in t, reconstructs the parametrization
over K(t), specializes it at t = 1, keeps the multiplicity-one roots and
removes the roots where the Jacobian determinant of f vanishes.
"""

import itertools
import logging
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

from .bounds import bezout_number, homotopy_bezout_number
from .errors import (
    CharacteristicTooSmall,
    InvalidValuation,
    NotInvertible,
    NotSeparating,
    ReconstructionFailed,
    SingularSystem,
)
from .ring import (
    Domain,
    Poly,
    RatFunc,
    RationalFunctionField,
    SeriesRing,
    pade_reconstruct,
    poly_gcd,
    poly_invmod,
    poly_monic,
    poly_mul,
    poly_order_at,
    poly_quo_exact,
    poly_rem,
    poly_scale,
    poly_strip,
    series_pad,
    squarefree_and_multiplicity_one,
    vandermonde_affine_solve,
)
from .slp import (
    SLP,
    BlockStructure,
    MultiDegreeVector,
    SLPBuilder,
    berkowitz_det,
    homotopy_combine,
    jacobian_det_in_quotient,
    jacobian_matrix,
    slp_eval,
    slp_eval_in_quotient,
    slp_jacobian,
    solve_with_unit_det,
)
from .zdp import (
    LinearForm,
    ZeroDimParam,
    convert_denominator_convention,
    empty_param,
    interpolate_from_points,
    separating_candidates,
    to_trace_convention,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StartSystem:
    """
    g_i = prod_j prod_k kappa_c(X_j) over the nodes c of equation i in block j,
    where kappa_c(X_j) = X_j1 + c X_j2 + ... + c^(n_j-1) X_jn_j + c^n_j.
    """
    blocks: BlockStructure
    degrees: MultiDegreeVector
    nodes: Tuple[Tuple[Tuple[int, ...], ...], ...]
    program: SLP

    @property
    def root_count(self) -> int:
        return bezout_number(self.blocks, self.degrees)


def build_start_system(blocks: BlockStructure, degrees: MultiDegreeVector, K: Optional[Domain] = None) -> StartSystem:
    degrees.check_against(blocks)
    if any(not any(row) for row in degrees):
        raise ValueError("every equation needs a nonzero multi-degree")
    e = degrees.max_column_sum
    if K is not None and K.characteristic and K.characteristic < e:
        raise CharacteristicTooSmall(f"characteristic {K.characteristic} is below {e}")

    offsets = [0] * blocks.m
    nodes = []
    for row in degrees:
        eq_nodes = []
        for j, dij in enumerate(row):
            eq_nodes.append(tuple(range(offsets[j], offsets[j] + dij)))
            offsets[j] += dij
        nodes.append(tuple(eq_nodes))

    builder = SLPBuilder(blocks.N)
    outputs = []
    for eq_nodes in nodes:
        factors = []
        for j, block_nodes in enumerate(eq_nodes):
            variables = blocks.variables(j)
            for c in block_nodes:
                terms = [builder.mul(builder.const(c ** l), builder.input(x)) for l, x in enumerate(variables)]
                terms.append(builder.const(c ** len(variables)))
                factors.append(builder.sum(terms))
        outputs.append(builder.product(factors))
    return StartSystem(blocks, degrees, tuple(nodes), builder.build(outputs, blocks))


def _block_assignments(degrees: MultiDegreeVector, capacity: List[int], i: int = 0) -> Iterator[Tuple[int, ...]]:
    """Maps equations to blocks with exactly n_j equations per block j."""
    if i == degrees.M:
        yield ()
        return
    for j, dij in enumerate(degrees[i]):
        if dij and capacity[j]:
            capacity[j] -= 1
            for rest in _block_assignments(degrees, capacity, i + 1):
                yield (j,) + rest
            capacity[j] += 1


def solve_start_system(S: StartSystem, K: Domain) -> List[Tuple]:
    """All C_n(d) roots of the start system, each with an invertible Jacobian."""
    blocks, degrees = S.blocks, S.degrees
    jac = slp_jacobian(S.program)
    N = blocks.N
    roots = []
    for sigma in _block_assignments(degrees, list(blocks.sizes)):
        ranges = [range(degrees[i][j]) for i, j in enumerate(sigma)]
        for choice in itertools.product(*ranges):
            point = [K.zero] * N
            for j in range(blocks.m):
                block_nodes = [S.nodes[i][j][k] for i, (bj, k) in enumerate(zip(sigma, choice)) if bj == j]
                for x, value in zip(blocks.variables(j), vandermonde_affine_solve(block_nodes, K)):
                    point[x] = value
            matrix = jacobian_matrix(jac, point, K, N, range(N))
            if K.is_zero(berkowitz_det(matrix, K)):
                raise SingularSystem(f"start system Jacobian vanishes at {point}")
            roots.append(tuple(point))
    logger.info("start system: %d roots", len(roots))
    return roots


def _lift_point(h: SLP, jac_h: SLP, point: Sequence, precision: int, K: Domain) -> Tuple:
    N = len(point)
    x = [(c,) for c in point]
    prec = 1
    while prec < precision:
        prec = min(2 * prec, precision)
        S = SeriesRing(K, prec)
        xs = [series_pad(xi, prec, K) for xi in x]
        args = [S.gen] + xs
        residual = slp_eval(h, args, S)
        matrix = jacobian_matrix(jac_h, args, S, N, range(1, N + 1))
        step = solve_with_unit_det(matrix, residual, S)
        x = [S.sub(xi, di) for xi, di in zip(xs, step)]
    return tuple(series_pad(xi, precision, K) for xi in x)


def lift_points_in_t(
    h: SLP,
    points: Sequence[Sequence],
    precision: int,
    K: Domain,
    jac_h: Optional[SLP] = None,
    threads: int = 1,
) -> List[Tuple]:
    """Newton lifting of the roots of h(0, X) to power series roots of h(t, X) mod t^precision."""
    jac_h = jac_h or slp_jacobian(h)
    if threads > 1 and len(points) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            lifted = list(pool.map(lambda pt: _lift_point(h, jac_h, pt, precision, K), points))
    else:
        lifted = [_lift_point(h, jac_h, pt, precision, K) for pt in points]
    logger.debug("lifted %d points to precision %d", len(lifted), precision)
    return lifted


def _ratfunc_at_zero(r: RatFunc, K: Domain):
    num = r.num[0] if r.num else K.zero
    return K.div(num, r.den[0])


def specialize_at_zero(P: ZeroDimParam) -> ZeroDimParam:
    F = P.domain
    K = F.base
    q = poly_strip((_ratfunc_at_zero(c, K) for c in P.q), K)
    v = tuple(poly_strip((_ratfunc_at_zero(c, K) for c in vi), K) for vi in P.v)
    return ZeroDimParam(q, v, P.lam, K)


def reconstruct_param_in_t(
    h: SLP,
    points: Sequence[Sequence],
    lam: LinearForm,
    degree_bound: int,
    K: Domain,
    jac_h: Optional[SLP] = None,
    threads: int = 1,
) -> ZeroDimParam:
    """Parametrization of the homotopy curve over K(t) from its series expansion at t = 0."""
    precision = 2 * degree_bound + 1
    lifted = lift_points_in_t(h, points, precision, K, jac_h, threads)
    S = SeriesRing(K, precision)
    series_param = interpolate_from_points(lifted, lam, S)
    F = RationalFunctionField(K)

    def pade(c):
        return pade_reconstruct(c, degree_bound, degree_bound, K)

    q = poly_strip((pade(c) for c in series_param.q), F)
    v = tuple(poly_strip((pade(c) for c in vi), F) for vi in series_param.v)
    P = ZeroDimParam(q, v, tuple(lam), F)

    start = interpolate_from_points(points, lam, K)
    if specialize_at_zero(P) != start:
        raise ReconstructionFailed("t = 0 specialization differs from the start parametrization")
    logger.debug("reconstructed parametrization over %s, degree %d", F, P.degree)
    return P


def _valuation_at_one(r: RatFunc, K: Domain) -> Tuple[int, RatFunc]:
    """Order of r at t = 1 and r / (t - 1)^order."""
    a, num = poly_order_at(r.num, K.one, K)
    b, den = poly_order_at(r.den, K.one, K)
    return a - b, RatFunc(num, den)


@dataclass(frozen=True)
class SpecializationAtOne:
    """Values at t = 1 of (t - 1)^e q and (t - 1)^e v, and the normalized (r, w)."""
    e: int
    qstar: Poly
    vstar: Tuple[Poly, ...]
    r0: object
    r: Poly
    w: Tuple[Poly, ...]


def specialize_at_one_detailed(P: ZeroDimParam) -> SpecializationAtOne:
    F = P.domain
    K = F.base

    def expand(poly):
        return [None if not c.num else _valuation_at_one(c, K) for c in poly]

    q_vals = expand(P.q)
    v_vals = [expand(vi) for vi in P.v]
    e = -min(nu for nu, _ in (x for x in q_vals if x is not None))
    for vi in v_vals:
        for x in vi:
            if x is not None and x[0] < -e:
                raise InvalidValuation("a coordinate keeps a pole at t = 1")

    def value(x):
        if x is None or x[0] + e > 0:
            return K.zero
        unit = x[1]
        return K.div(_eval_at_one(unit.num, K), _eval_at_one(unit.den, K))

    qstar = poly_strip((value(x) for x in q_vals), K)
    vstar = tuple(poly_strip((value(x) for x in vi), K) for vi in v_vals)
    r0 = qstar[-1]
    inv = K.inv(r0)
    r = poly_scale(qstar, inv, K)
    w = tuple(poly_rem(poly_scale(vi, inv, K), r, K) for vi in vstar)
    logger.debug("specialized at t = 1: e = %d, deg r = %d", e, len(r) - 1)
    return SpecializationAtOne(e, qstar, vstar, r0, r, w)


def specialize_at_one(P: ZeroDimParam) -> Tuple[Poly, Tuple[Poly, ...]]:
    """
    (r, w): q and v scaled by (t - 1)^e so that q has no pole at t = 1,
    evaluated there and divided by the leading coefficient r_0 of q*(1, T).
    """
    s = specialize_at_one_detailed(P)
    return s.r, s.w


def _eval_at_one(a: Poly, K: Domain):
    acc = K.zero
    for c in a:
        acc = K.add(acc, c)
    return acc


def multiplicity_one_and_divide(r: Poly, w: Sequence[Poly], K: Domain) -> Tuple[Poly, Tuple[Poly, ...]]:
    """Keep the simple roots r_1 of r and set y_i = w_i / r_>=2 mod r_1."""
    _, r1 = squarefree_and_multiplicity_one(r, K)
    rest = poly_quo_exact(poly_monic(r, K), r1, K)
    inv = poly_invmod(rest, r1, K)
    y = tuple(poly_rem(poly_mul(wi, inv, K), r1, K) for wi in w)
    return r1, y


def clean(r1: Poly, y: Sequence[Poly], lam: LinearForm, f: SLP, K: Domain, jac: Optional[SLP] = None) -> ZeroDimParam:
    """
    Restrict (r1, y, lambda) to the roots where f vanishes and det J(f) does not.
    (r1, y) is in the T q' convention; so is the output.
    """
    P = ZeroDimParam(poly_monic(r1, K), tuple(y), tuple(lam), K)
    if P.is_empty:
        return empty_param(lam, K)
    q, w = convert_denominator_convention(P)
    good = q
    for residue in slp_eval_in_quotient(f, q, w, K):
        good = poly_gcd(good, residue, K)
    D = jacobian_det_in_quotient(f, P, jac)
    good = poly_quo_exact(good, poly_gcd(good, D, K), K)
    if len(good) <= 1:
        logger.info("clean: no nonsingular roots among %d", P.degree)
        return empty_param(lam, K)
    logger.info("clean: kept %d of %d roots", len(good) - 1, P.degree)
    return to_trace_convention(good, [poly_rem(wi, good, K) for wi in w], lam, K)


def nonsingular_solutions(
    f: SLP,
    degrees: MultiDegreeVector,
    K: Domain,
    seed: Optional[int] = None,
    rng: Optional[random.Random] = None,
    lam: Optional[LinearForm] = None,
    threads: int = 1,
) -> Optional[ZeroDimParam]:
    """
    Parametrization of a subset of the nonsingular solutions of f over K,
    equal to all of them when lambda is well separating. None on failure.
    """
    blocks = f.block_structure
    degrees.check_against(blocks)
    N = blocks.N
    C = bezout_number(blocks, degrees)
    if lam is None:
        rng = rng or random.Random(seed)
        family = separating_candidates(N, max(C * C, 1))
        lam = family[rng.randint(1, len(family))]
    if C == 0:
        return empty_param(lam, K)
    p = K.characteristic
    if p and p < max(degrees.max_column_sum, C + 1):
        raise CharacteristicTooSmall(f"characteristic {p} is too small for C = {C}")
    if p and p < 8 * (N - 1) * C * C:
        logger.warning("characteristic %d is below 8(N-1)C^2 = %d", p, 8 * (N - 1) * C * C)

    Cprime = homotopy_bezout_number(blocks, degrees)
    try:
        start = build_start_system(blocks, degrees, K)
        points = solve_start_system(start, K)
        h = homotopy_combine(f, start.program)
        Pt = reconstruct_param_in_t(h, points, lam, Cprime, K, threads=threads)
        r, w = specialize_at_one(Pt)
        r1, y = multiplicity_one_and_divide(r, w, K)
        result = clean(r1, y, lam, f, K)
    except (NotSeparating, ReconstructionFailed, InvalidValuation, SingularSystem, NotInvertible) as exc:
        logger.info("run failed with lambda %s: %s", lam, exc)
        return None
    logger.info("nonsingular solutions over %s: degree %d", K, result.degree)
    return result


def nonsingular_solutions_repeated(
    f: SLP,
    degrees: MultiDegreeVector,
    K: Domain,
    seed: Optional[int] = None,
    repeat_k: int = 3,
    threads: int = 1,
) -> Tuple[Optional[ZeroDimParam], List[Optional[int]]]:
    """Highest-degree result of repeat_k independent runs, with the degree of each run."""
    rng = random.Random(seed)
    best: Optional[ZeroDimParam] = None
    run_degrees: List[Optional[int]] = []
    for _ in range(repeat_k):
        P = nonsingular_solutions(f, degrees, K, rng=rng, threads=threads)
        run_degrees.append(None if P is None else P.degree)
        if P is not None and (best is None or P.degree > best.degree):
            best = P
    if len({d for d in run_degrees if d is not None}) > 1:
        logger.warning("runs disagree on the solution count: %s", run_degrees)
    return best, run_degrees
