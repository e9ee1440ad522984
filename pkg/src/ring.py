"""
Exact arithmetic foundation.
Coefficient domains (integers, rationals, prime fields, integers mod p^k,
truncated power series, quotient algebras, rational functions), dense
univariate polynomials, truncated series, and the two reconstruction
primitives: Padé approximation in t and rational number reconstruction.

Polynomials and series are tuples of domain elements, lowest degree first.
Polynomials are always stripped: the zero polynomial is the empty tuple.
A series of precision n is a tuple of exactly n elements.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Any, Iterable, Sequence, Tuple

from sympy.polys.domains import QQ as SYMPY_QQ, ZZ as SYMPY_ZZ
from sympy.polys.euclidtools import dup_gcd, dup_gcdex
from sympy.polys.galoistools import gf_gcd, gf_gcdex, gf_sqf_part
from sympy.polys.sqfreetools import dup_sqf_part

from .errors import (
    CharacteristicTooSmall,
    DomainError,
    NotInvertible,
    RationalReconstructionError,
    ReconstructionFailed,
    SingularSystem,
)

Poly = Tuple[Any, ...]
Series = Tuple[Any, ...]


class Domain:
    """Base class for coefficient domains."""

    name = "K"
    is_field = False
    native = False  # elements are Python numbers; arithmetic is reduce(op)
    characteristic = 0
    zero: Any = 0
    one: Any = 1

    def _key(self) -> tuple:
        return (type(self).__name__,)

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return self.name

    def reduce(self, x):
        return x

    def convert(self, value):
        raise NotImplementedError

    def add(self, a, b):
        return self.reduce(a + b)

    def sub(self, a, b):
        return self.reduce(a - b)

    def neg(self, a):
        return self.reduce(-a)

    def mul(self, a, b):
        return self.reduce(a * b)

    def is_zero(self, a) -> bool:
        return a == 0

    def is_unit(self, a) -> bool:
        return not self.is_zero(a)

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))


class IntegerRing(Domain):
    """The integers."""

    name = "ZZ"
    native = True

    def convert(self, value):
        if isinstance(value, Fraction):
            if value.denominator != 1:
                raise DomainError(f"{value} is not an integer")
            return value.numerator
        return int(value)

    def is_unit(self, a) -> bool:
        return a in (1, -1)

    def inv(self, a):
        if a in (1, -1):
            return a
        raise NotInvertible(f"{a} is not a unit in ZZ")


class RationalField(Domain):
    """The rationals, as fractions.Fraction."""

    name = "QQ"
    is_field = True
    native = True
    zero = Fraction(0)
    one = Fraction(1)

    def convert(self, value):
        return Fraction(value)

    def inv(self, a):
        if a == 0:
            raise NotInvertible("division by zero in QQ")
        return 1 / Fraction(a)


class PrimeField(Domain):
    """The prime field F_p, elements are integers in [0, p)."""

    is_field = True
    native = True

    def __init__(self, p: int):
        if p < 2:
            raise DomainError(f"invalid prime {p}")
        self.p = p
        self.characteristic = p
        self.name = f"GF({p})"

    def _key(self) -> tuple:
        return ("GF", self.p)

    def reduce(self, x):
        return x % self.p

    def convert(self, value):
        if isinstance(value, Fraction):
            den = value.denominator % self.p
            if den == 0:
                raise DomainError(f"denominator of {value} vanishes mod {self.p}")
            return value.numerator * pow(den, -1, self.p) % self.p
        return int(value) % self.p

    def is_zero(self, a) -> bool:
        return a % self.p == 0

    def inv(self, a):
        if a % self.p == 0:
            raise NotInvertible(f"0 has no inverse mod {self.p}")
        return pow(a, -1, self.p)

    def symmetric(self, a) -> int:
        """Representative in (-p/2, p/2]."""
        a %= self.p
        return a - self.p if a > self.p // 2 else a


class PrimePowerRing(Domain):
    """The ring Z/p^k."""

    native = True

    def __init__(self, p: int, k: int):
        if p < 2 or k < 1:
            raise DomainError(f"invalid modulus {p}^{k}")
        self.p = p
        self.k = k
        self.modulus = p ** k
        self.characteristic = self.modulus
        self.name = f"ZZ/{p}^{k}"

    def _key(self) -> tuple:
        return ("ZZ/p^k", self.p, self.k)

    @property
    def residue_field(self) -> PrimeField:
        return PrimeField(self.p)

    def reduce(self, x):
        return x % self.modulus

    def convert(self, value):
        if isinstance(value, Fraction):
            den = value.denominator
            if den % self.p == 0:
                raise DomainError(f"denominator of {value} is divisible by {self.p}")
            return value.numerator * pow(den, -1, self.modulus) % self.modulus
        return int(value) % self.modulus

    def is_zero(self, a) -> bool:
        return a % self.modulus == 0

    def is_unit(self, a) -> bool:
        return a % self.p != 0

    def inv(self, a):
        if a % self.p == 0:
            raise NotInvertible(f"{a} is not a unit mod {self.p}^{self.k}")
        return pow(a, -1, self.modulus)


class SeriesRing(Domain):
    """Truncated power series K[[t]]/(t^precision)."""

    def __init__(self, base: Domain, precision: int):
        if precision < 1:
            raise DomainError("series precision must be positive")
        self.base = base
        self.precision = precision
        self.characteristic = base.characteristic
        self.zero = (base.zero,) * precision
        self.one = (base.one,) + (base.zero,) * (precision - 1)
        self.name = f"{base.name}[[t]]/t^{precision}"

    def _key(self) -> tuple:
        return ("series", self.base, self.precision)

    @property
    def gen(self) -> Series:
        """The series t."""
        if self.precision == 1:
            return self.zero
        return (self.base.zero, self.base.one) + (self.base.zero,) * (self.precision - 2)

    def convert(self, value):
        if isinstance(value, tuple):
            return series_pad(tuple(self.base.convert(c) for c in value), self.precision, self.base)
        return (self.base.convert(value),) + (self.base.zero,) * (self.precision - 1)

    def add(self, a, b):
        K = self.base
        return tuple(K.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        K = self.base
        return tuple(K.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.base.neg(x) for x in a)

    def mul(self, a, b):
        return series_mul(a, b, self.base)

    def is_zero(self, a) -> bool:
        return all(self.base.is_zero(c) for c in a)

    def is_unit(self, a) -> bool:
        return self.base.is_unit(a[0])

    def inv(self, a):
        return series_inv(a, self.base)


class QuotientAlgebra(Domain):
    """The algebra K[T]/(modulus), modulus monic. Elements are reduced polynomials."""

    def __init__(self, base: Domain, modulus: Poly):
        modulus = poly_strip(modulus, base)
        if not modulus:
            raise DomainError("quotient by the zero polynomial")
        if modulus[-1] != base.one:
            raise DomainError("quotient modulus must be monic")
        self.base = base
        self.modulus = modulus
        self.characteristic = base.characteristic
        self.zero = ()
        self.one = poly_rem((base.one,), modulus, base)
        self.name = f"{base.name}[T]/(deg {len(modulus) - 1})"

    def _key(self) -> tuple:
        return ("quotient", self.base, self.modulus)

    def convert(self, value):
        if isinstance(value, tuple):
            return poly_rem(poly_convert(value, self.base), self.modulus, self.base)
        return poly_rem(poly_strip((self.base.convert(value),), self.base), self.modulus, self.base)

    def add(self, a, b):
        return poly_add(a, b, self.base)

    def sub(self, a, b):
        return poly_sub(a, b, self.base)

    def neg(self, a):
        return poly_neg(a, self.base)

    def mul(self, a, b):
        return poly_rem(poly_mul(a, b, self.base), self.modulus, self.base)

    def is_zero(self, a) -> bool:
        return not a

    def is_unit(self, a) -> bool:
        try:
            self.inv(a)
        except NotInvertible:
            return False
        return True

    def inv(self, a):
        return poly_invmod(a, self.modulus, self.base)


@dataclass(frozen=True)
class RatFunc:
    """A rational function num/den in t, den monic and gcd(num, den) = 1."""

    num: Poly
    den: Poly

    def degrees(self) -> Tuple[int, int]:
        return poly_degree(self.num), poly_degree(self.den)


class RationalFunctionField(Domain):
    """The field K(t) over a field K."""

    is_field = True

    def __init__(self, base: Domain):
        if not base.is_field:
            raise DomainError("rational functions need a field of coefficients")
        self.base = base
        self.characteristic = base.characteristic
        self.zero = RatFunc((), (base.one,))
        self.one = RatFunc((base.one,), (base.one,))
        self.name = f"{base.name}(t)"

    def _key(self) -> tuple:
        return ("fractions", self.base)

    def convert(self, value):
        if isinstance(value, RatFunc):
            return value
        if isinstance(value, tuple):
            return RatFunc(poly_convert(value, self.base), (self.base.one,))
        return RatFunc(poly_strip((self.base.convert(value),), self.base), (self.base.one,))

    def add(self, a, b):
        K = self.base
        if a.den == b.den:
            return ratfunc_normalize(poly_add(a.num, b.num, K), a.den, K)
        num = poly_add(poly_mul(a.num, b.den, K), poly_mul(b.num, a.den, K), K)
        return ratfunc_normalize(num, poly_mul(a.den, b.den, K), K)

    def neg(self, a):
        return RatFunc(poly_neg(a.num, self.base), a.den)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        K = self.base
        return ratfunc_normalize(poly_mul(a.num, b.num, K), poly_mul(a.den, b.den, K), K)

    def is_zero(self, a) -> bool:
        return not a.num

    def inv(self, a):
        if not a.num:
            raise NotInvertible("division by the zero rational function")
        return ratfunc_normalize(a.den, a.num, self.base)


ZZ = IntegerRing()
QQ = RationalField()


# ---------------------------------------------------------------------------
# Dense univariate polynomials
# ---------------------------------------------------------------------------

def poly_strip(a: Iterable, K: Domain) -> Poly:
    """Drop trailing zero coefficients."""
    a = list(a)
    while a and K.is_zero(a[-1]):
        a.pop()
    if K.native:
        return tuple(K.reduce(c) for c in a)
    return tuple(a)


def poly_convert(a: Iterable, K: Domain) -> Poly:
    return poly_strip((K.convert(c) for c in a), K)


def poly_degree(a: Poly) -> int:
    """Degree, with -1 for the zero polynomial."""
    return len(a) - 1


def poly_add(a: Poly, b: Poly, K: Domain) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = K.add(out[i], c)
    return poly_strip(out, K)


def poly_neg(a: Poly, K: Domain) -> Poly:
    return tuple(K.neg(c) for c in a)


def poly_sub(a: Poly, b: Poly, K: Domain) -> Poly:
    out = list(a) + [K.zero] * (len(b) - len(a))
    for i, c in enumerate(b):
        out[i] = K.sub(out[i], c)
    return poly_strip(out, K)


def poly_scale(a: Poly, c, K: Domain) -> Poly:
    return poly_strip((K.mul(c, x) for x in a), K)


def poly_mul(a: Poly, b: Poly, K: Domain) -> Poly:
    """Schoolbook product."""
    if not a or not b:
        return ()
    if K.native:
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return poly_strip(out, K)
    out = [K.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if K.is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = K.add(out[i + j], K.mul(x, y))
    return poly_strip(out, K)


def poly_monic(a: Poly, K: Domain) -> Poly:
    if not a:
        return a
    if a[-1] == K.one:
        return a
    return poly_scale(a, K.inv(a[-1]), K)


def poly_divrem(a: Poly, b: Poly, K: Domain) -> Tuple[Poly, Poly]:
    """Division with remainder; the leading coefficient of b must be a unit."""
    if not b:
        raise NotInvertible("polynomial division by zero")
    lc_inv = K.inv(b[-1])
    db = len(b) - 1
    if len(a) <= db:
        return (), a
    rem = list(a)
    quo = [K.zero] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = rem[i]
        if K.is_zero(c):
            continue
        c = K.mul(c, lc_inv)
        quo[i - db] = c
        base = i - db
        if K.native:
            for j in range(db + 1):
                rem[base + j] = K.reduce(rem[base + j] - c * b[j])
        else:
            for j in range(db + 1):
                rem[base + j] = K.sub(rem[base + j], K.mul(c, b[j]))
    return poly_strip(quo, K), poly_strip(rem[:db], K)


def poly_rem(a: Poly, b: Poly, K: Domain) -> Poly:
    if len(a) < len(b):
        return a
    return poly_divrem(a, b, K)[1]


def poly_quo_exact(a: Poly, b: Poly, K: Domain) -> Poly:
    q, r = poly_divrem(a, b, K)
    if r:
        raise ValueError("polynomial division is not exact")
    return q


def poly_diff(a: Poly, K: Domain) -> Poly:
    return poly_strip((K.mul(K.convert(i), a[i]) for i in range(1, len(a))), K)


def poly_eval(a: Poly, x, K: Domain):
    acc = K.zero
    for c in reversed(a):
        acc = K.add(K.mul(acc, x), c)
    return acc


def to_dense(a: Poly, K: Domain) -> list:
    """sympy dense form of a polynomial over QQ or GF(p): highest degree first."""
    if isinstance(K, PrimeField):
        return [int(c) % K.p for c in reversed(a)]
    return [to_sympy_rational(c) for c in reversed(a)]


def from_dense(f: Sequence, K: Domain) -> Poly:
    if isinstance(K, PrimeField):
        return poly_strip((int(c) for c in reversed(f)), K)
    return poly_strip((from_sympy_rational(c) for c in reversed(f)), K)


def to_sympy_rational(x):
    x = Fraction(x)
    return SYMPY_QQ(x.numerator, x.denominator)


def from_sympy_rational(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def poly_gcd(a: Poly, b: Poly, K: Domain) -> Poly:
    """Monic gcd over a field; gcd(0, 0) = 0."""
    if isinstance(K, PrimeField):
        return from_dense(gf_gcd(to_dense(a, K), to_dense(b, K), K.p, SYMPY_ZZ), K)
    if isinstance(K, RationalField):
        return poly_monic(from_dense(dup_gcd(to_dense(a, K), to_dense(b, K), SYMPY_QQ), K), K)
    a = poly_monic(a, K)
    b = poly_monic(b, K)
    while b:
        a, b = b, poly_monic(poly_rem(a, b, K), K)
    return a


def poly_xgcd(a: Poly, b: Poly, K: Domain) -> Tuple[Poly, Poly, Poly]:
    """Return (g, u, v) with g monic, g = gcd(a, b) and u*a + v*b = g."""
    if not a and not b:
        raise ValueError("gcd of two zero polynomials")
    if isinstance(K, PrimeField):
        u, v, g = gf_gcdex(to_dense(a, K), to_dense(b, K), K.p, SYMPY_ZZ)
        return from_dense(g, K), from_dense(u, K), from_dense(v, K)
    # dup_gcdex recovers v by exact division by b
    if isinstance(K, RationalField) and b:
        u, v, g = dup_gcdex(to_dense(a, K), to_dense(b, K), SYMPY_QQ)
        return from_dense(g, K), from_dense(u, K), from_dense(v, K)
    r0, r1 = a, b
    s0, s1 = (K.one,), ()
    t0, t1 = (), (K.one,)
    while r1:
        q, r = poly_divrem(r0, r1, K)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(s0, poly_mul(q, s1, K), K)
        t0, t1 = t1, poly_sub(t0, poly_mul(q, t1, K), K)
    c = K.inv(r0[-1])
    return poly_scale(r0, c, K), poly_scale(s0, c, K), poly_scale(t0, c, K)


def poly_sqf_part(a: Poly, K: Domain) -> Poly:
    """Monic squarefree part of a nonzero polynomial; char K must exceed deg a."""
    if isinstance(K, PrimeField):
        return from_dense(gf_sqf_part(to_dense(a, K), K.p, SYMPY_ZZ), K)
    if isinstance(K, RationalField):
        return poly_monic(from_dense(dup_sqf_part(to_dense(a, K), SYMPY_QQ), K), K)
    return poly_monic(poly_quo_exact(a, poly_gcd(a, poly_diff(a, K), K), K), K)


def poly_invmod(a: Poly, m: Poly, K: Domain) -> Poly:
    """Inverse of a in K[T]/(m), m monic."""
    if isinstance(K, PrimePowerRing):
        F = K.residue_field
        b = poly_invmod(poly_convert(a, F), poly_convert(m, F), F)
        precision = 1
        two = (2 % K.modulus,)
        while precision < K.k:
            ab = poly_rem(poly_mul(a, b, K), m, K)
            b = poly_rem(poly_mul(b, poly_sub(two, ab, K), K), m, K)
            precision *= 2
        return b
    if not K.is_field:
        raise NotInvertible(f"polynomial inverses are not available over {K}")
    g, s, _ = poly_xgcd(poly_rem(a, m, K), m, K)
    if len(g) != 1:
        raise NotInvertible("polynomial is not invertible modulo m")
    return poly_rem(s, m, K)


def poly_from_roots(roots: Iterable, K: Domain) -> Poly:
    out: Poly = (K.one,)
    for r in roots:
        out = poly_mul(out, (K.neg(r), K.one), K)
    return out


def poly_order_at(a: Poly, c, K: Domain) -> Tuple[int, Poly]:
    """Multiplicity of (T - c) in a nonzero a, and the cofactor."""
    if not a:
        raise ValueError("the zero polynomial has infinite order")
    linear = (K.neg(c), K.one)
    k = 0
    while True:
        q, r = poly_divrem(a, linear, K)
        if r:
            return k, a
        a = q
        k += 1


# ---------------------------------------------------------------------------
# Truncated power series
# ---------------------------------------------------------------------------

def series_pad(a: Sequence, precision: int, K: Domain) -> Series:
    a = tuple(a[:precision])
    return a + (K.zero,) * (precision - len(a))


def series_mul(a: Series, b: Series, K: Domain) -> Series:
    """Product truncated to the smaller precision."""
    n = min(len(a), len(b))
    if K.native:
        out = [0] * n
        for i in range(n):
            x = a[i]
            if x:
                for j in range(n - i):
                    out[i + j] += x * b[j]
        return tuple(K.reduce(c) for c in out)
    out = [K.zero] * n
    for i in range(n):
        x = a[i]
        if K.is_zero(x):
            continue
        for j in range(n - i):
            out[i + j] = K.add(out[i + j], K.mul(x, b[j]))
    return tuple(out)


def series_inv(a: Series, K: Domain) -> Series:
    inv0 = K.inv(a[0])
    out = [inv0]
    for k in range(1, len(a)):
        acc = K.zero
        for j in range(1, k + 1):
            acc = K.add(acc, K.mul(a[j], out[k - j]))
        out.append(K.neg(K.mul(inv0, acc)))
    return tuple(out)


# ---------------------------------------------------------------------------
# Rational functions and reconstruction
# ---------------------------------------------------------------------------

def ratfunc_normalize(num: Poly, den: Poly, K: Domain) -> RatFunc:
    num = poly_strip(num, K)
    den = poly_strip(den, K)
    if not den:
        raise NotInvertible("rational function with zero denominator")
    if not num:
        return RatFunc((), (K.one,))
    g = poly_gcd(num, den, K)
    if len(g) > 1:
        num = poly_quo_exact(num, g, K)
        den = poly_quo_exact(den, g, K)
    c = K.inv(den[-1])
    return RatFunc(poly_scale(num, c, K), poly_scale(den, c, K))


def ratfunc_series(r: RatFunc, precision: int, K: Domain) -> Series:
    """Expansion at t = 0; the denominator must not vanish there."""
    num = series_pad(r.num, precision, K)
    den = series_pad(r.den, precision, K)
    return series_mul(num, series_inv(den, K), K)


def pade_reconstruct(s: Series, dnum: int, dden: int, K: Domain) -> RatFunc:
    """
    Rational function num/den with deg num <= dnum, deg den <= dden and
    num/den = s mod t^(dnum + dden + 1).

    Extended Euclid on (t^n, s mod t^n), halted at the first remainder of
    degree <= dnum.
    """
    n = dnum + dden + 1
    if len(s) < n:
        raise ValueError(f"series precision {len(s)} is below {n}")
    r0: Poly = (K.zero,) * n + (K.one,)
    r1 = poly_strip(s[:n], K)
    v0: Poly = ()
    v1: Poly = (K.one,)
    while poly_degree(r1) > dnum:
        q, r = poly_divrem(r0, r1, K)
        r0, r1 = r1, r
        v0, v1 = v1, poly_sub(v0, poly_mul(q, v1, K), K)
    if poly_degree(v1) > dden or not v1 or K.is_zero(v1[0]):
        raise ReconstructionFailed("no Padé approximant with the requested degrees")
    result = ratfunc_normalize(r1, v1, K)
    if poly_degree(result.num) > dnum or poly_degree(result.den) > dden:
        raise ReconstructionFailed("Padé approximant exceeds the degree bounds")
    if ratfunc_series(result, n, K) != series_pad(s, n, K):
        raise ReconstructionFailed("Padé approximant does not match the series")
    return result


def rational_reconstruct(residue: int, modulus: int, bound: int) -> Fraction:
    """
    The fraction u/v with |u| <= bound, 0 < v <= bound, gcd(v, modulus) = 1
    and u = residue * v mod modulus. Unique when 2 * bound^2 < modulus.
    """
    if modulus < 2 or bound < 1:
        raise ValueError("rational reconstruction needs modulus >= 2 and bound >= 1")
    r0, r1 = modulus, residue % modulus
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound or gcd(t1, modulus) != 1:
        raise RationalReconstructionError(f"no fraction within {bound} matches {residue} mod {modulus}")
    if t1 < 0:
        r1, t1 = -r1, -t1
    return Fraction(r1, t1)


# ---------------------------------------------------------------------------
# Small solvers
# ---------------------------------------------------------------------------

def vandermonde_affine_solve(nodes: Sequence, K: Domain) -> Tuple[Any, ...]:
    """
    The unique x with x_1 + c x_2 + ... + c^(n-1) x_n + c^n = 0 for every
    node c. These are the low coefficients of prod (Z - c).
    """
    nodes = [K.convert(c) for c in nodes]
    for i in range(len(nodes)):
        for j in range(i):
            if K.is_zero(K.sub(nodes[i], nodes[j])):
                raise SingularSystem(f"repeated node {nodes[i]} in {K}")
    return tuple(poly_from_roots(nodes, K)[: len(nodes)]) if nodes else ()


def squarefree_and_multiplicity_one(r: Poly, K: Domain) -> Tuple[Poly, Poly]:
    """Return (squarefree part of r, product of its simple roots), both monic."""
    if not r:
        raise ValueError("squarefree decomposition of the zero polynomial")
    if K.characteristic and K.characteristic <= poly_degree(r):
        raise CharacteristicTooSmall(
            f"characteristic {K.characteristic} does not exceed degree {poly_degree(r)}"
        )
    dr = poly_diff(r, K)
    rtilde = poly_sqf_part(r, K)
    r1 = poly_monic(poly_quo_exact(rtilde, poly_gcd(rtilde, dr, K), K), K)
    return rtilde, r1
