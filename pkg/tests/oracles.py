"""
Independent oracles for the solver tests: random sparse systems and an
exhaustive numpy search for the nonsingular solutions over F_p.
"""

import itertools
import random
from typing import Dict, List, Sequence, Set, Tuple

import numpy as np

Terms = Dict[Tuple[int, ...], int]


def random_system(
    rng: random.Random,
    sizes: Sequence[int],
    rows: Sequence[Sequence[int]],
    bound: int = 9,
    nonzero: bool = False,
) -> List[Terms]:
    """One dense polynomial per row, with block degrees at most the row entries."""
    offsets = [sum(sizes[:j]) for j in range(len(sizes))]
    N = sum(sizes)
    polys = []
    for row in rows:
        per_block = []
        for j, n in enumerate(sizes):
            exps = [e for e in itertools.product(range(row[j] + 1), repeat=n) if sum(e) <= row[j]]
            per_block.append(exps)
        terms: Terms = {}
        for parts in itertools.product(*per_block):
            exps = [0] * N
            for j, part in enumerate(parts):
                exps[offsets[j]:offsets[j] + sizes[j]] = part
            c = rng.choice((-1, 1)) * rng.randint(1, bound) if nonzero else rng.randint(-bound, bound)
            if c:
                terms[tuple(exps)] = c
        polys.append(terms)
    return polys


def derivative(terms: Terms, k: int) -> Terms:
    out: Terms = {}
    for exps, c in terms.items():
        if exps[k]:
            e = list(exps)
            e[k] -= 1
            out[tuple(e)] = out.get(tuple(e), 0) + c * exps[k]
    return out


def _evaluate(terms: Terms, grid: Sequence[np.ndarray], p: int) -> np.ndarray:
    acc = np.zeros(grid[0].shape, dtype=np.int64)
    for exps, c in terms.items():
        mono = np.full(grid[0].shape, c % p, dtype=np.int64)
        for x, e in zip(grid, exps):
            for _ in range(e):
                mono = mono * x % p
        acc = (acc + mono) % p
    return acc


def _evaluate_at(terms: Terms, x: Sequence[int], p: int) -> int:
    acc = 0
    for exps, c in terms.items():
        mono = c
        for xi, e in zip(x, exps):
            mono = mono * pow(xi, e, p) % p
        acc += mono
    return acc % p


def _det(matrix: List[List[int]], p: int) -> int:
    if len(matrix) == 1:
        return matrix[0][0] % p
    acc = 0
    for j, c in enumerate(matrix[0]):
        minor = [row[:j] + row[j + 1:] for row in matrix[1:]]
        acc += (-1) ** j * c * _det(minor, p)
    return acc % p


def nonsingular_solutions_by_search(polys: Sequence[Terms], N: int, p: int) -> Set[Tuple[int, ...]]:
    """{x in F_p^N : f(x) = 0, det J(f)(x) != 0} by exhaustive evaluation."""
    axes = np.arange(p, dtype=np.int64)
    grid = np.meshgrid(*([axes] * N), indexing="ij")
    zero = np.ones(grid[0].shape, dtype=bool)
    for terms in polys:
        zero &= _evaluate(terms, grid, p) == 0
    jac = [[derivative(terms, k) for k in range(N)] for terms in polys]
    out = set()
    for idx in zip(*np.nonzero(zero)):
        x = tuple(int(c) for c in idx)
        if _det([[_evaluate_at(d, x, p) for d in row] for row in jac], p):
            out.add(x)
    return out
