"""
Straight-line programs.
A program is a list of instructions over {input, constant, +, -, x} with
integer constants. Programs are evaluated over any coefficient domain from
ring.py, differentiated in reverse mode into new programs, combined into
homotopies, and evaluated inside quotient algebras K[T]/(q).
"""

import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from .errors import NotInvertible, SingularSystem
from .ring import Domain, QuotientAlgebra, poly_strip

logger = logging.getLogger(__name__)


class Op(Enum):
    """Instruction opcodes."""
    INPUT = "input"
    CONST = "const"
    ADD = "add"
    SUB = "sub"
    MUL = "mul"


_BINARY = (Op.ADD, Op.SUB, Op.MUL)


class Instr(NamedTuple):
    op: Op
    a: int
    b: int = -1


@dataclass(frozen=True)
class BlockStructure:
    """Variable blocks X_1, ..., X_m of sizes n_1, ..., n_m."""
    sizes: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(n) for n in self.sizes))
        if not self.sizes or any(n < 1 for n in self.sizes):
            raise ValueError(f"block sizes must be positive, got {self.sizes}")

    @property
    def m(self) -> int:
        return len(self.sizes)

    @property
    def N(self) -> int:
        return sum(self.sizes)

    @property
    def offsets(self) -> Tuple[int, ...]:
        out, acc = [], 0
        for n in self.sizes:
            out.append(acc)
            acc += n
        return tuple(out)

    def variables(self, j: int) -> range:
        """Global indices of the variables of block j."""
        start = self.offsets[j]
        return range(start, start + self.sizes[j])


@dataclass(frozen=True)
class MultiDegreeVector:
    """Per-equation multi-degrees d_i = (d_i1, ..., d_im)."""
    degrees: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.degrees)
        object.__setattr__(self, "degrees", rows)
        if not rows:
            raise ValueError("empty multi-degree vector")
        if len({len(row) for row in rows}) != 1:
            raise ValueError("multi-degrees have inconsistent block counts")
        if any(x < 0 for row in rows for x in row):
            raise ValueError("multi-degrees must be nonnegative")

    def __len__(self) -> int:
        return len(self.degrees)

    def __iter__(self):
        return iter(self.degrees)

    def __getitem__(self, i):
        return self.degrees[i]

    @property
    def M(self) -> int:
        return len(self.degrees)

    @property
    def m(self) -> int:
        return len(self.degrees[0])

    @property
    def column_sums(self) -> Tuple[int, ...]:
        return tuple(sum(col) for col in zip(*self.degrees))

    @property
    def max_column_sum(self) -> int:
        """e = max_j sum_i d_ij."""
        return max(self.column_sums)

    @property
    def max_total_degree(self) -> int:
        """max_i sum_j d_ij."""
        return max(sum(row) for row in self.degrees)

    def check_against(self, blocks: BlockStructure, square: bool = True):
        if self.m != blocks.m:
            raise ValueError(f"multi-degrees have {self.m} blocks, structure has {blocks.m}")
        if square and self.M != blocks.N:
            raise ValueError(f"{self.M} equations for {blocks.N} unknowns")


@dataclass(frozen=True)
class SLP:
    """An immutable straight-line program over the integers."""
    n_inputs: int
    instructions: Tuple[Instr, ...]
    outputs: Tuple[int, ...]
    blocks: Optional[BlockStructure] = None

    def __post_init__(self):
        for idx, ins in enumerate(self.instructions):
            if ins.op is Op.INPUT:
                if not 0 <= ins.a < self.n_inputs:
                    raise ValueError(f"instruction {idx} loads missing input {ins.a}")
            elif ins.op in _BINARY:
                if not (0 <= ins.a < idx and 0 <= ins.b < idx):
                    raise ValueError(f"instruction {idx} references a later instruction")
        if any(not 0 <= o < len(self.instructions) for o in self.outputs):
            raise ValueError("output reference out of range")
        if self.blocks is not None and self.blocks.N != self.n_inputs:
            raise ValueError("block structure does not match the input count")

    @property
    def n_outputs(self) -> int:
        return len(self.outputs)

    @property
    def size(self) -> int:
        return len(self.instructions)

    @property
    def block_structure(self) -> BlockStructure:
        return self.blocks or BlockStructure((self.n_inputs,))

    @property
    def constants(self) -> Tuple[int, ...]:
        return tuple(ins.a for ins in self.instructions if ins.op is Op.CONST)

    @property
    def constant_height(self) -> float:
        """max log|c| over the nonzero constants."""
        return max((math.log(abs(c)) for c in self.constants if c), default=0.0)


class SLPBuilder:
    """Incremental construction with input/constant caching and trivial folding."""

    def __init__(self, n_inputs: int):
        self.n_inputs = n_inputs
        self._instructions: List[Instr] = []
        self._inputs: Dict[int, int] = {}
        self._consts: Dict[int, int] = {}
        self._values: Dict[int, int] = {}

    def _emit(self, op: Op, a: int, b: int = -1) -> int:
        self._instructions.append(Instr(op, a, b))
        return len(self._instructions) - 1

    def input(self, i: int) -> int:
        if i not in self._inputs:
            self._inputs[i] = self._emit(Op.INPUT, i)
        return self._inputs[i]

    def const(self, c: int) -> int:
        c = int(c)
        if c not in self._consts:
            ref = self._emit(Op.CONST, c)
            self._consts[c] = ref
            self._values[ref] = c
        return self._consts[c]

    def value(self, ref: int) -> Optional[int]:
        """The constant value of a reference, if it is a constant."""
        return self._values.get(ref)

    def add(self, a: int, b: int) -> int:
        va, vb = self.value(a), self.value(b)
        if va is not None and vb is not None:
            return self.const(va + vb)
        if va == 0:
            return b
        if vb == 0:
            return a
        return self._emit(Op.ADD, a, b)

    def sub(self, a: int, b: int) -> int:
        va, vb = self.value(a), self.value(b)
        if va is not None and vb is not None:
            return self.const(va - vb)
        if vb == 0:
            return a
        return self._emit(Op.SUB, a, b)

    def mul(self, a: int, b: int) -> int:
        va, vb = self.value(a), self.value(b)
        if va is not None and vb is not None:
            return self.const(va * vb)
        if va == 0 or vb == 0:
            return self.const(0)
        if va == 1:
            return b
        if vb == 1:
            return a
        return self._emit(Op.MUL, a, b)

    def neg(self, a: int) -> int:
        return self.sub(self.const(0), a)

    def sum(self, refs: Sequence[int]) -> int:
        acc = self.const(0)
        for r in refs:
            acc = self.add(acc, r)
        return acc

    def product(self, refs: Sequence[int]) -> int:
        acc = self.const(1)
        for r in refs:
            acc = self.mul(acc, r)
        return acc

    def embed(self, prog: SLP, input_refs: Sequence[int]) -> List[int]:
        """Inline prog with its inputs bound to input_refs; returns the reference of every instruction."""
        mapping: List[int] = []
        for ins in prog.instructions:
            if ins.op is Op.INPUT:
                mapping.append(input_refs[ins.a])
            elif ins.op is Op.CONST:
                mapping.append(self.const(ins.a))
            elif ins.op is Op.ADD:
                mapping.append(self.add(mapping[ins.a], mapping[ins.b]))
            elif ins.op is Op.SUB:
                mapping.append(self.sub(mapping[ins.a], mapping[ins.b]))
            else:
                mapping.append(self.mul(mapping[ins.a], mapping[ins.b]))
        return mapping

    def build(self, outputs: Sequence[int], blocks: Optional[BlockStructure] = None) -> SLP:
        instructions = list(self._instructions)
        if not instructions:
            instructions.append(Instr(Op.CONST, 0))
        return SLP(self.n_inputs, tuple(instructions), tuple(outputs), blocks)


def slp_eval(prog: SLP, point: Sequence, K: Domain) -> Tuple:
    """Evaluate prog at point in the domain K."""
    if len(point) != prog.n_inputs:
        raise ValueError(f"expected {prog.n_inputs} coordinates, got {len(point)}")
    point = [K.convert(x) for x in point]
    consts: Dict[int, object] = {}
    values: list = []
    append = values.append
    for ins in prog.instructions:
        op = ins.op
        if op is Op.MUL:
            append(K.mul(values[ins.a], values[ins.b]))
        elif op is Op.ADD:
            append(K.add(values[ins.a], values[ins.b]))
        elif op is Op.SUB:
            append(K.sub(values[ins.a], values[ins.b]))
        elif op is Op.INPUT:
            append(point[ins.a])
        else:
            c = consts.get(ins.a)
            if c is None:
                c = consts[ins.a] = K.convert(ins.a)
            append(c)
    return tuple(values[o] for o in prog.outputs)


def _accumulate(builder: SLPBuilder, adjoints: Dict[int, int], ref: int, value: int):
    if ref in adjoints:
        adjoints[ref] = builder.add(adjoints[ref], value)
    else:
        adjoints[ref] = value


def _reverse_sweep(builder: SLPBuilder, prog: SLP, mapping: List[int], out: int) -> List[int]:
    """Adjoint propagation from instruction out back to the inputs."""
    adjoints: Dict[int, int] = {out: builder.const(1)}
    grads: List[Optional[int]] = [None] * prog.n_inputs
    for idx in range(out, -1, -1):
        adj = adjoints.pop(idx, None)
        if adj is None:
            continue
        ins = prog.instructions[idx]
        if ins.op is Op.INPUT:
            g = grads[ins.a]
            grads[ins.a] = adj if g is None else builder.add(g, adj)
        elif ins.op is Op.ADD:
            _accumulate(builder, adjoints, ins.a, adj)
            _accumulate(builder, adjoints, ins.b, adj)
        elif ins.op is Op.SUB:
            _accumulate(builder, adjoints, ins.a, adj)
            _accumulate(builder, adjoints, ins.b, builder.neg(adj))
        elif ins.op is Op.MUL:
            _accumulate(builder, adjoints, ins.a, builder.mul(adj, mapping[ins.b]))
            _accumulate(builder, adjoints, ins.b, builder.mul(adj, mapping[ins.a]))
    return [builder.const(0) if g is None else g for g in grads]


def slp_jacobian(prog: SLP) -> SLP:
    """Program computing all partial derivatives, row-major (output i, input k)."""
    builder = SLPBuilder(prog.n_inputs)
    mapping = builder.embed(prog, [builder.input(i) for i in range(prog.n_inputs)])
    outputs: List[int] = []
    for out in prog.outputs:
        outputs.extend(_reverse_sweep(builder, prog, mapping, out))
    jac = builder.build(outputs, prog.blocks)
    logger.debug("jacobian program: %d -> %d instructions", prog.size, jac.size)
    return jac


def slp_gradient(prog: SLP) -> SLP:
    if prog.n_outputs != 1:
        raise ValueError("gradient needs a program with a single output")
    return slp_jacobian(prog)


def homotopy_combine(f: SLP, g: SLP) -> SLP:
    """Program in (t, X) computing g + t (f - g), i.e. t f + (1 - t) g."""
    if f.n_outputs != g.n_outputs:
        raise ValueError(f"output-count mismatch: {f.n_outputs} != {g.n_outputs}")
    if f.n_inputs != g.n_inputs:
        raise ValueError(f"input-count mismatch: {f.n_inputs} != {g.n_inputs}")
    builder = SLPBuilder(f.n_inputs + 1)
    t = builder.input(0)
    xs = [builder.input(i + 1) for i in range(f.n_inputs)]
    fmap = builder.embed(f, xs)
    gmap = builder.embed(g, xs)
    outputs = []
    for fo, go in zip(f.outputs, g.outputs):
        fi, gi = fmap[fo], gmap[go]
        outputs.append(builder.add(gi, builder.mul(t, builder.sub(fi, gi))))
    blocks = BlockStructure((1,) + f.block_structure.sizes)
    return builder.build(outputs, blocks)


def slp_reduce_mod_p(prog: SLP, p: int) -> SLP:
    """Same instruction graph with every constant reduced to [0, p)."""
    if p < 2:
        raise ValueError(f"invalid modulus {p}")
    instructions = tuple(
        Instr(Op.CONST, ins.a % p) if ins.op is Op.CONST else ins
        for ins in prog.instructions
    )
    return replace(prog, instructions=instructions)


def slp_from_polynomials(
    polys: Sequence[Mapping[Tuple[int, ...], int]],
    n_inputs: int,
    blocks: Optional[BlockStructure] = None,
) -> SLP:
    """
    Naive program for expanded polynomials given as {exponent tuple: integer
    coefficient}: cached powers, then cached monomials, then one coefficient
    combination per polynomial.
    """
    builder = SLPBuilder(n_inputs)
    powers: Dict[Tuple[int, int], int] = {}
    monomials: Dict[Tuple[int, ...], int] = {}

    def power(i: int, k: int) -> int:
        if k == 1:
            return builder.input(i)
        if (i, k) not in powers:
            powers[(i, k)] = builder.mul(power(i, k - 1), builder.input(i))
        return powers[(i, k)]

    def monomial(exps: Tuple[int, ...]) -> int:
        if exps not in monomials:
            monomials[exps] = builder.product([power(i, e) for i, e in enumerate(exps) if e])
        return monomials[exps]

    outputs = []
    for poly in polys:
        terms = []
        for exps in sorted(poly):
            if len(exps) != n_inputs:
                raise ValueError(f"exponent vector {exps} has the wrong length")
            c = int(poly[exps])
            if c:
                terms.append(builder.mul(builder.const(c), monomial(tuple(exps))))
        outputs.append(builder.sum(terms))
    return builder.build(outputs, blocks)


# ---------------------------------------------------------------------------
# Division-free linear algebra over commutative rings
# ---------------------------------------------------------------------------

def _dot(u: Sequence, v: Sequence, K: Domain):
    acc = K.zero
    for x, y in zip(u, v):
        acc = K.add(acc, K.mul(x, y))
    return acc


def _matvec(A: Sequence[Sequence], v: Sequence, K: Domain) -> list:
    return [_dot(row, v, K) for row in A]


def berkowitz_charpoly(matrix: Sequence[Sequence], K: Domain) -> list:
    """Coefficients of det(x I - A), highest degree first, without divisions."""
    n = len(matrix)
    if n == 0:
        return [K.one]
    a = matrix[0][0]
    R = list(matrix[0][1:])
    C = [row[0] for row in matrix[1:]]
    A = [list(row[1:]) for row in matrix[1:]]
    column = [K.one, K.neg(a)]
    vec = C
    for _ in range(n - 1):
        column.append(K.neg(_dot(R, vec, K)))
        vec = _matvec(A, vec, K)
    sub = berkowitz_charpoly(A, K)
    out = []
    for i in range(n + 1):
        acc = K.zero
        for j in range(max(0, i - n), min(i, n - 1) + 1):
            acc = K.add(acc, K.mul(column[i - j], sub[j]))
        out.append(acc)
    return out


def berkowitz_det(matrix: Sequence[Sequence], K: Domain):
    n = len(matrix)
    c = berkowitz_charpoly(matrix, K)[n]
    return c if n % 2 == 0 else K.neg(c)


def adjugate_solve(matrix: Sequence[Sequence], rhs: Sequence, K: Domain) -> Tuple[object, list]:
    """
    (det A, adj(A) rhs) by Cayley-Hamilton:
    adj(A) = (-1)^(n-1) (A^(n-1) + c_1 A^(n-2) + ... + c_(n-1) I).
    """
    n = len(matrix)
    c = berkowitz_charpoly(matrix, K)
    det = c[n] if n % 2 == 0 else K.neg(c[n])
    y = list(rhs)
    for k in range(1, n):
        y = [K.add(ay, K.mul(c[k], r)) for ay, r in zip(_matvec(matrix, y, K), rhs)]
    if n % 2 == 0:
        y = [K.neg(x) for x in y]
    return det, y


def solve_with_unit_det(matrix: Sequence[Sequence], rhs: Sequence, K: Domain) -> list:
    """A^-1 rhs, assuming det A is a unit of K."""
    det, y = adjugate_solve(matrix, rhs, K)
    try:
        inv = K.inv(det)
    except NotInvertible as exc:
        raise SingularSystem("matrix determinant is not invertible") from exc
    return [K.mul(inv, x) for x in y]


def jacobian_matrix(jac: SLP, point: Sequence, K: Domain, rows: int, columns: Sequence[int]) -> list:
    """Evaluate a Jacobian program and keep the given columns."""
    entries = slp_eval(jac, point, K)
    width = jac.n_outputs // rows
    return [[entries[i * width + k] for k in columns] for i in range(rows)]


def slp_eval_in_quotient(prog: SLP, q, w: Sequence, K: Domain) -> Tuple:
    """Evaluate prog at (w_1, ..., w_N) in K[T]/(q); the w_i are monic-value coordinates."""
    A = QuotientAlgebra(K, q)
    return slp_eval(prog, [poly_strip(x, K) for x in w], A)


def jacobian_det_in_quotient(fprog: SLP, P, jacobian: Optional[SLP] = None):
    """det J(f) at the point parametrized by P, as a residue modulo q."""
    from .zdp import convert_denominator_convention

    if fprog.n_outputs != fprog.n_inputs:
        raise ValueError("Jacobian determinant needs a square system")
    q, w = convert_denominator_convention(P)
    A = QuotientAlgebra(P.domain, q)
    jac = jacobian or slp_jacobian(fprog)
    N = fprog.n_inputs
    matrix = jacobian_matrix(jac, list(w), A, N, range(N))
    return berkowitz_det(matrix, A)
