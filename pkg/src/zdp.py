"""
Zero-dimensional parametrizations.
A finite point set V in K^N is encoded as (q, v_1, ..., v_N, lambda) with q
monic and squarefree, deg v_i < deg q, and lambda(v) = T q' mod q, so that
the points are x_i = v_i(tau) / q'(tau) over the roots tau of q.
"""

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple

from .errors import NotInvertible, NotSeparating
from .ring import (
    Domain,
    Poly,
    PrimePowerRing,
    QQ,
    IntegerRing,
    poly_add,
    poly_convert,
    poly_diff,
    poly_eval,
    poly_from_roots,
    poly_gcd,
    poly_invmod,
    poly_mul,
    poly_quo_exact,
    poly_rem,
    poly_scale,
    poly_strip,
    poly_sub,
)

LinearForm = Tuple[int, ...]


@dataclass(frozen=True)
class ZeroDimParam:
    """(q, v, lambda) over a coefficient domain, in the T q' convention."""
    q: Poly
    v: Tuple[Poly, ...]
    lam: LinearForm
    domain: Domain

    @property
    def degree(self) -> int:
        return len(self.q) - 1

    @property
    def N(self) -> int:
        return len(self.lam)

    @property
    def is_empty(self) -> bool:
        return self.degree == 0


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def empty_param(lam: LinearForm, K: Domain) -> ZeroDimParam:
    """The parametrization of the empty set: q = 1, v = 0."""
    return ZeroDimParam((K.one,), tuple(() for _ in lam), tuple(lam), K)


def lambda_of(lam: LinearForm, v: Sequence[Poly], K: Domain) -> Poly:
    """The polynomial lambda(v_1, ..., v_N)."""
    acc: Poly = ()
    for c, vi in zip(lam, v):
        if c:
            acc = poly_add(acc, poly_scale(vi, K.convert(c), K), K)
    return acc


def _squarefree_domain(K: Domain) -> Domain:
    if isinstance(K, PrimePowerRing):
        return K.residue_field
    if isinstance(K, IntegerRing):
        return QQ
    return K


def validate(P: ZeroDimParam) -> ValidationReport:
    """Check monicity, squarefreeness, degrees and the trace identity."""
    K = P.domain
    q = P.q
    if not q:
        return ValidationReport(False, "q is zero")
    if q[-1] != K.one:
        return ValidationReport(False, "q is not monic")
    if len(P.v) != len(P.lam):
        return ValidationReport(False, "v and lambda have different lengths")
    if not any(P.lam):
        return ValidationReport(False, "lambda is the zero form")
    F = _squarefree_domain(K)
    qF = poly_convert(q, F)
    if len(poly_gcd(qF, poly_diff(qF, F), F)) > 1:
        return ValidationReport(False, "q is not squarefree")
    for i, vi in enumerate(P.v):
        if len(vi) >= len(q):
            return ValidationReport(False, f"deg v_{i + 1} >= deg q")
    dq = poly_diff(q, K)
    trace = poly_rem(poly_mul((K.zero, K.one), dq, K), q, K)
    if poly_sub(lambda_of(P.lam, P.v, K), trace, K):
        return ValidationReport(False, "lambda(v) != T q' mod q")
    return ValidationReport(True)


def lambda_values(points: Sequence[Sequence], lam: LinearForm, K: Domain) -> list:
    values = []
    for x in points:
        acc = K.zero
        for c, xi in zip(lam, x):
            if c:
                acc = K.add(acc, K.mul(K.convert(c), xi))
        values.append(acc)
    return values


def is_separating(lam: LinearForm, points: Sequence[Sequence], K: Domain) -> bool:
    values = lambda_values(points, lam, K)
    for i in range(len(values)):
        for j in range(i):
            if K.is_zero(K.sub(values[i], values[j])):
                return False
    return True


def interpolate_from_points(points: Sequence[Sequence], lam: LinearForm, K: Domain) -> ZeroDimParam:
    """
    q = prod (T - lambda(x)) and v_i = sum_x x_i prod_{x' != x} (T - lambda(x')).
    Works over any commutative domain, series rings included.
    """
    lam = tuple(lam)
    if not points:
        return empty_param(lam, K)
    values = lambda_values(points, lam, K)
    for i in range(len(values)):
        for j in range(i):
            if K.is_zero(K.sub(values[i], values[j])):
                raise NotSeparating(f"points {j} and {i} share the lambda-value {values[i]}")
    q = poly_from_roots(values, K)
    v = [()] * len(lam)
    for x, value in zip(points, values):
        cofactor = poly_quo_exact(q, (K.neg(value), K.one), K)
        for i, xi in enumerate(x):
            v[i] = poly_add(v[i], poly_scale(cofactor, xi, K), K)
    return ZeroDimParam(q, tuple(v), lam, K)


def separating_form(N: int, i: int) -> LinearForm:
    """u^(i) = X_1 + i X_2 + ... + i^(N-1) X_N."""
    return tuple(i ** k for k in range(N))


@dataclass(frozen=True)
class SeparatingFamily:
    """The forms u^(1), ..., u^(8(N-1)k), indexed from 1."""
    N: int
    k: int

    def __post_init__(self):
        if self.N < 1 or self.k < 1:
            raise ValueError("separating family needs N >= 1 and k >= 1")

    def __len__(self) -> int:
        return max(8 * (self.N - 1) * self.k, 1)

    def __getitem__(self, i: int) -> LinearForm:
        if self.N > 1 and not 1 <= i <= len(self):
            raise IndexError(f"form index {i} outside 1..{len(self)}")
        return separating_form(self.N, i)

    def __iter__(self) -> Iterator[LinearForm]:
        for i in range(1, len(self) + 1):
            yield separating_form(self.N, i)


def separating_candidates(N: int, k: int) -> SeparatingFamily:
    return SeparatingFamily(N, k)


def convert_denominator_convention(P: ZeroDimParam) -> Tuple[Poly, Tuple[Poly, ...]]:
    """(q, w) with w_i = v_i / q' mod q, so that x_i = w_i(tau) at each root tau."""
    K = P.domain
    if len(P.q) <= 1:
        return P.q, tuple(() for _ in P.v)
    try:
        inv = poly_invmod(poly_diff(P.q, K), P.q, K)
    except NotInvertible as exc:
        raise NotInvertible("q is not squarefree, q' has no inverse modulo q") from exc
    return P.q, tuple(poly_rem(poly_mul(vi, inv, K), P.q, K) for vi in P.v)


def to_trace_convention(q: Poly, w: Sequence[Poly], lam: LinearForm, K: Domain) -> ZeroDimParam:
    """Inverse of convert_denominator_convention: v_i = w_i q' mod q."""
    q = poly_strip(q, K)
    dq = poly_diff(q, K)
    v = tuple(poly_rem(poly_mul(poly_strip(wi, K), dq, K), q, K) for wi in w)
    return ZeroDimParam(q, v, tuple(lam), K)


def coordinates_at(P: ZeroDimParam, tau) -> Tuple:
    """The point x_i = v_i(tau) / q'(tau) for a root tau of q."""
    K = P.domain
    dq = poly_eval(poly_diff(P.q, K), tau, K)
    inv = K.inv(dq)
    return tuple(K.mul(poly_eval(vi, tau, K), inv) for vi in P.v)


def map_param(P: ZeroDimParam, K: Domain) -> ZeroDimParam:
    """Convert all coefficients into another domain (e.g. QQ -> GF(p), ZZ/p^2k -> ZZ/p^k)."""
    return ZeroDimParam(
        poly_convert(P.q, K),
        tuple(poly_convert(vi, K) for vi in P.v),
        P.lam,
        K,
    )


def points_of(P: ZeroDimParam, roots: Optional[Sequence] = None) -> list:
    """Points at the given roots of q; over a prime field, all roots are found by search when omitted."""
    K = P.domain
    if roots is None:
        p = getattr(K, "p", None)
        if p is None or K.characteristic != p:
            raise ValueError("root search needs a prime field")
        roots = [tau for tau in range(p) if poly_eval(P.q, tau, K) == 0]
    return [coordinates_at(P, tau) for tau in roots]
