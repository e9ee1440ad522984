"""
Solving over the rationals.
Picks a random prime from the range fixed by the lifting ledger, solves
modulo p with the symbolic homotopy, lifts the parametrization p-adically
by Newton iteration in (Z/p^2k)[T]/(q), reconstructs rational coefficients
and validates the result over Q.
"""

import logging
import math
import random
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from sympy import isprime

from .bounds import (
    LiftingLedger,
    beta_vector,
    form_height,
    lifting_ledger,
    output_height_bound,
    poly_height,
)
from .config import Outcome
from .errors import NotInvertible, ReconstructionFailed, SingularSystem
from .homotopy import nonsingular_solutions
from .ring import (
    QQ,
    PrimeField,
    PrimePowerRing,
    QuotientAlgebra,
    poly_diff,
    poly_gcd,
    poly_mul,
    poly_rem,
    poly_sub,
    rational_reconstruct,
)
from .slp import (
    SLP,
    MultiDegreeVector,
    jacobian_det_in_quotient,
    jacobian_matrix,
    slp_eval,
    slp_eval_in_quotient,
    slp_jacobian,
    slp_reduce_mod_p,
    solve_with_unit_det,
)
from .zdp import (
    ValidationReport,
    ZeroDimParam,
    convert_denominator_convention,
    lambda_of,
    map_param,
    to_trace_convention,
    validate,
)

logger = logging.getLogger(__name__)


def prime_oracle(B: int, rng: random.Random) -> int:
    """A random prime in {B+1, ..., 2B}, by rejection sampling."""
    if B < 2:
        raise ValueError(f"prime range needs B >= 2, got {B}")
    while True:
        candidate = rng.randint(B + 1, 2 * B)
        if isprime(candidate):
            return candidate


@dataclass(frozen=True)
class PadicParam:
    """A parametrization with coefficients in Z/p^k."""
    param: ZeroDimParam
    p: int
    k: int

    @property
    def modulus(self) -> int:
        return self.p ** self.k


def padic_lift(f: SLP, P: PadicParam, jac: Optional[SLP] = None) -> PadicParam:
    """One Newton step: precision p^k -> p^2k."""
    R = PrimePowerRing(P.p, 2 * P.k)
    lifted = map_param(P.param, R)
    lam = lifted.lam
    N = f.n_inputs
    if lifted.is_empty:
        return PadicParam(lifted, P.p, 2 * P.k)
    q, w = convert_denominator_convention(lifted)
    A = QuotientAlgebra(R, q)
    jac = jac or slp_jacobian(f)
    residual = slp_eval(f, list(w), A)
    matrix = jacobian_matrix(jac, list(w), A, N, range(N))
    try:
        step = solve_with_unit_det(matrix, residual, A)
    except SingularSystem as exc:
        raise SingularSystem(f"Jacobian is not invertible modulo {P.p}") from exc
    wp = [A.sub(wi, si) for wi, si in zip(w, step)]

    # lambda(w') = T + delta with delta = 0 mod p^k; move the roots of q by delta
    delta = poly_sub(lambda_of(lam, wp, R), A.convert((0, 1)), R)
    q_new = poly_sub(q, poly_rem(poly_mul(poly_diff(q, R), delta, R), q, R), R)
    w_new = [poly_sub(wi, poly_rem(poly_mul(poly_diff(wi, R), delta, R), q, R), R) for wi in wp]
    param = to_trace_convention(q_new, w_new, lam, R)
    logger.debug("p-adic lift to precision %d^%d", P.p, 2 * P.k)
    return PadicParam(param, P.p, 2 * P.k)


def reconstruction_bound(Hprime: float) -> int:
    """A power of two at least exp(H')."""
    return 2 ** max(math.ceil(Hprime / math.log(2)), 0)


def reconstruct_over_q(P: PadicParam, Hprime: float, f: Optional[SLP] = None) -> ZeroDimParam:
    """Rational reconstruction of every coefficient, then validation over Q."""
    bound = reconstruction_bound(Hprime)
    modulus = P.modulus
    if modulus <= 2 * bound * bound:
        logger.debug("modulus %d^%d is below the uniqueness threshold", P.p, P.k)

    def lift(poly):
        return tuple(rational_reconstruct(c, modulus, bound) for c in poly)

    rational = ZeroDimParam(lift(P.param.q), tuple(lift(vi) for vi in P.param.v), P.param.lam, QQ)
    report = validate(rational)
    if not report:
        raise ReconstructionFailed(f"reconstructed parametrization is invalid: {report.reason}")
    if f is not None and not rational.is_empty:
        q, w = convert_denominator_convention(rational)
        if any(slp_eval_in_quotient(f, q, w, QQ)):
            raise ReconstructionFailed("reconstructed points do not satisfy the system")
    return rational


def validate_over_q(
    f: SLP,
    P: ZeroDimParam,
    C: int,
    height_cap: float,
    jac: Optional[SLP] = None,
) -> ValidationReport:
    """Trace identity, f = 0 and det J(f) != 0 at every point, deg q <= C and heights <= height_cap."""
    report = validate(P)
    if not report:
        return report
    if P.degree > C:
        return ValidationReport(False, f"degree {P.degree} exceeds the Bezout bound {C}")
    if P.is_empty:
        return ValidationReport(True)
    q, w = convert_denominator_convention(P)
    if any(slp_eval_in_quotient(f, q, w, QQ)):
        return ValidationReport(False, "system does not vanish at the parametrized points")
    D = jacobian_det_in_quotient(f, P, jac)
    if len(poly_gcd(P.q, D, QQ)) > 1:
        return ValidationReport(False, "Jacobian determinant vanishes at a parametrized point")
    height = max(poly_height(c) for c in (P.q,) + P.v)
    if height > height_cap:
        return ValidationReport(False, f"height {height:.3f} exceeds the bound {height_cap:.3f}")
    return ValidationReport(True)


@dataclass
class SolveOutcome:
    """Result of solve_over_z: the outcome tag, the parametrization and the run details."""
    outcome: Outcome
    param: Optional[ZeroDimParam]
    ledger: LiftingLedger
    primes: List[int] = field(default_factory=list)
    run_degrees: List[Optional[int]] = field(default_factory=list)
    seed: Optional[int] = None

    @property
    def ok(self) -> bool:
        return self.outcome is not Outcome.FAIL


def _solve_once(
    f: SLP,
    degrees: MultiDegreeVector,
    ledger: LiftingLedger,
    beta: Sequence[float],
    p: int,
    rng: random.Random,
    jac: SLP,
    threads: int,
) -> Optional[ZeroDimParam]:
    K = PrimeField(p)
    modular = nonsingular_solutions(slp_reduce_mod_p(f, p), degrees, K, rng=rng, threads=threads)
    if modular is None:
        return None
    if modular.is_empty:
        return ZeroDimParam((QQ.one,), tuple(() for _ in modular.lam), modular.lam, QQ)

    bound = reconstruction_bound(ledger.Hprime)
    padic = PadicParam(map_param(modular, PrimePowerRing(p, 1)), p, 1)
    try:
        while padic.modulus <= 2 * bound * bound:
            padic = padic_lift(f, padic, jac)
        logger.info("lifted to precision %d^%d", p, padic.k)
        rational = reconstruct_over_q(padic, ledger.Hprime, f)
    except (ReconstructionFailed, SingularSystem, NotInvertible) as exc:
        logger.info("lifting modulo %d failed: %s", p, exc)
        return None

    height_cap = output_height_bound(f.block_structure, degrees, beta, form_height(rational.lam))
    report = validate_over_q(f, rational, ledger.C, height_cap, jac)
    if not report:
        logger.info("validation over Q failed: %s", report.reason)
        return None
    return rational


def solve_over_z(
    f: SLP,
    degrees: MultiDegreeVector,
    heights: Sequence[float],
    seed: Optional[int] = None,
    repeat_k: int = 3,
    prime_override: Optional[int] = None,
    threads: int = 1,
) -> SolveOutcome:
    """
    Nonsingular solutions of an integer system. Runs the modular pipeline
    repeat_k times and keeps the highest-degree validated parametrization.
    """
    blocks = f.block_structure
    ledger = lifting_ledger(blocks, degrees, heights)
    beta = beta_vector(heights, blocks, degrees)
    jac = slp_jacobian(f)
    rng = random.Random(seed)
    if prime_override is not None:
        logger.warning("using prime %d instead of a random prime in (%d, %d]", prime_override, ledger.B, 2 * ledger.B)

    result = SolveOutcome(Outcome.FAIL, None, ledger, seed=seed)
    for run in range(repeat_k):
        p = prime_override if prime_override is not None else prime_oracle(ledger.B, rng)
        P = _solve_once(f, degrees, ledger, beta, p, rng, jac, threads)
        result.primes.append(p)
        result.run_degrees.append(None if P is None else P.degree)
        logger.info("run %d modulo %d: %s", run + 1, p, "fail" if P is None else f"degree {P.degree}")
        if P is not None and (result.param is None or P.degree > result.param.degree):
            result.param = P

    found = {d for d in result.run_degrees if d is not None}
    if not found:
        result.outcome = Outcome.FAIL
    elif len(found) > 1:
        logger.warning("runs disagree on the solution count: %s", result.run_degrees)
        result.outcome = Outcome.LOWER_DEGREE_SUSPECTED
    else:
        result.outcome = Outcome.SUCCESS
    return result
