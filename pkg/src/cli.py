"""
Command line interface for mhsolve.
Reads a JSON system file, dispatches to the bounds / solve-modp / solve /
minimize commands and writes one JSON record to stdout or a file.
"""

import argparse
import json
import logging
import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import sympy
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from .bounds import (
    bound_report,
    homotopy_bezout_number,
    lagrange_bounds,
    lagrange_height_closed_form,
    lagrange_multidegrees,
)
from .config import Outcome, SolverConfig
from .errors import MhsolveError, SystemFileError
from .homotopy import nonsingular_solutions_repeated
from .liftz import solve_over_z
from .minimize import MinimizationProblem, critical_points, isolate_minimum
from .records import OutputRecord, format_coefficient
from .ring import PrimeField
from .slp import SLP, BlockStructure, MultiDegreeVector, slp_from_polynomials

logger = logging.getLogger(__name__)

_TRANSFORMATIONS = standard_transformations + (convert_xor,)
_HEIGHT_SLACK = 1e-9


@dataclass(frozen=True)
class ParsedSystem:
    """A system file after expansion: blocks, program, multi-degrees and heights."""
    blocks: BlockStructure
    program: SLP
    degrees: MultiDegreeVector
    heights: Tuple[float, ...]
    variables: Tuple[str, ...]
    polys: Tuple[Dict[Tuple[int, ...], int], ...]

    @property
    def total_degree(self) -> int:
        return max((sum(e) for poly in self.polys for e in poly), default=0)


def _load_json(path) -> Dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SystemFileError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SystemFileError(exc.msg, exc.lineno, exc.colno) from exc
    if not isinstance(data, dict):
        raise SystemFileError("system file must hold a JSON object")
    return data


def _parse_blocks(data: Dict) -> Tuple[List[str], List[int]]:
    blocks = data.get("blocks")
    if not isinstance(blocks, list) or not blocks:
        raise SystemFileError("'blocks' must be a non-empty list")
    names: List[str] = []
    sizes: List[int] = []
    for j, block in enumerate(blocks):
        variables = block.get("vars") if isinstance(block, dict) else None
        if not isinstance(variables, list) or not variables:
            raise SystemFileError(f"block {j} needs a non-empty 'vars' list")
        for name in variables:
            if not isinstance(name, str) or not name.isidentifier():
                raise SystemFileError(f"invalid variable name {name!r} in block {j}")
            if name in names:
                raise SystemFileError(f"variable {name} belongs to more than one block")
            names.append(name)
        sizes.append(len(variables))
    return names, sizes


def _expand(text: str, index: int, symbols: Dict[str, sympy.Symbol]) -> sympy.Poly:
    if not isinstance(text, str):
        raise SystemFileError(f"polys[{index}] must be a string")
    try:
        expr = parse_expr(text, local_dict=dict(symbols), transformations=_TRANSFORMATIONS)
    except SyntaxError as exc:
        raise SystemFileError(f"polys[{index}], column {exc.offset or 0}: {exc.msg}") from exc
    except Exception as exc:
        raise SystemFileError(f"polys[{index}]: cannot parse {text!r}: {exc}") from exc
    unknown = {str(s) for s in expr.free_symbols} - set(symbols)
    if unknown:
        raise SystemFileError(f"polys[{index}] uses undeclared variables {sorted(unknown)}")
    try:
        return sympy.Poly(sympy.expand(expr), *symbols.values(), domain="QQ")
    except sympy.PolynomialError as exc:
        raise SystemFileError(f"polys[{index}] is not a polynomial: {exc}") from exc


def _integer_terms(poly: sympy.Poly) -> Dict[Tuple[int, ...], int]:
    """Coefficients scaled by the lcm of their denominators."""
    terms = {monom: Fraction(int(c.p), int(c.q)) for monom, c in poly.terms() if c != 0}
    scale = math.lcm(*(c.denominator for c in terms.values())) if terms else 1
    return {monom: int(c * scale) for monom, c in terms.items()}


def parse_system(path) -> ParsedSystem:
    data = _load_json(path)
    names, sizes = _parse_blocks(data)
    polys_text = data.get("polys")
    if not isinstance(polys_text, list) or not polys_text:
        raise SystemFileError("'polys' must be a non-empty list")
    symbols = {name: sympy.Symbol(name) for name in names}
    blocks = BlockStructure(tuple(sizes))

    polys = [_integer_terms(_expand(text, i, symbols)) for i, text in enumerate(polys_text)]
    degrees = []
    heights = []
    for terms in polys:
        degrees.append(tuple(
            max((sum(e[x] for x in blocks.variables(j)) for e in terms), default=0)
            for j in range(blocks.m)
        ))
        heights.append(max((math.log(abs(c)) for c in terms.values()), default=0.0))

    declared = data.get("degrees")
    if declared is not None:
        if len(declared) != len(polys) or any(len(row) != blocks.m for row in declared):
            raise SystemFileError("'degrees' does not match the polynomials and blocks")
        for i, (row, actual) in enumerate(zip(declared, degrees)):
            if any(int(a) < b for a, b in zip(row, actual)):
                raise SystemFileError(f"declared multi-degree {row} of polys[{i}] is below {list(actual)}")
        degrees = [tuple(int(a) for a in row) for row in declared]
    declared_heights = data.get("heights")
    if declared_heights is not None:
        if len(declared_heights) != len(polys):
            raise SystemFileError("'heights' does not match the polynomials")
        for i, (s, actual) in enumerate(zip(declared_heights, heights)):
            if float(s) + _HEIGHT_SLACK < actual:
                raise SystemFileError(f"declared height {s} of polys[{i}] is below {actual:.6f}")
        heights = [max(float(s), actual) for s, actual in zip(declared_heights, heights)]

    program = slp_from_polynomials(polys, blocks.N, blocks)
    return ParsedSystem(
        blocks=blocks,
        program=program,
        degrees=MultiDegreeVector(tuple(degrees)),
        heights=tuple(heights),
        variables=tuple(names),
        polys=tuple(polys),
    )


def _require_square(system: ParsedSystem):
    if len(system.polys) != system.blocks.N:
        raise SystemFileError(f"{len(system.polys)} equations for {system.blocks.N} unknowns")


def _cmd_bounds(args, config: SolverConfig) -> OutputRecord:
    system = parse_system(args.input)
    _require_square(system)
    report = bound_report(system.blocks, system.degrees, system.heights)
    record = OutputRecord("bounds", Outcome.SUCCESS.value, variables=list(system.variables))
    record.bounds = report.to_dict()
    record.extra = {"blocks": list(system.blocks.sizes), "degrees": [list(r) for r in system.degrees]}
    return record


def _cmd_solve_modp(args, config: SolverConfig) -> OutputRecord:
    system = parse_system(args.input)
    _require_square(system)
    K = PrimeField(args.prime)
    P, run_degrees = nonsingular_solutions_repeated(
        system.program, system.degrees, K, seed=config.seed, repeat_k=config.repeat, threads=config.threads
    )
    outcome = Outcome.FAIL if P is None else Outcome.SUCCESS
    if P is not None and len({d for d in run_degrees if d is not None}) > 1:
        outcome = Outcome.LOWER_DEGREE_SUSPECTED
    record = OutputRecord(
        "solve-modp", outcome.value, variables=list(system.variables), seed=config.seed,
        primes=[args.prime], repeats=config.repeat, run_degrees=run_degrees,
    )
    record.domain = f"GF({args.prime})"
    record.set_param(P)
    return record


def _cmd_solve(args, config: SolverConfig) -> OutputRecord:
    system = parse_system(args.input)
    _require_square(system)
    result = solve_over_z(
        system.program, system.degrees, system.heights,
        seed=config.seed, repeat_k=config.repeat, prime_override=args.prime, threads=config.threads,
    )
    record = OutputRecord(
        "solve", result.outcome.value, variables=list(system.variables), seed=config.seed,
        primes=result.primes, repeats=config.repeat, run_degrees=result.run_degrees,
    )
    record.bounds = {
        "C": result.ledger.C,
        "Cprime": homotopy_bezout_number(system.blocks, system.degrees),
        **result.ledger.to_dict(),
    }
    record.set_param(result.param)
    return record


def _cmd_minimize(args, config: SolverConfig) -> OutputRecord:
    system = parse_system(args.input)
    if system.blocks.m != 1:
        raise SystemFileError("minimize expects a single block of variables")
    n, p = system.blocks.N, len(system.polys)
    if p > n:
        raise SystemFileError(f"{p} constraints for {n} variables")
    d = max(system.total_degree, 1)
    s = max(system.heights)
    h = slp_from_polynomials(system.polys, n)
    prob = MinimizationProblem(n, p, h, d, s)
    found = critical_points(prob, seed=config.seed, repeat_k=config.repeat, prime_override=args.prime, threads=config.threads)
    record = OutputRecord(
        "minimize", found.solve.outcome.value, variables=list(system.variables), seed=config.seed,
        primes=found.solve.primes, repeats=config.repeat, run_degrees=found.solve.run_degrees,
    )
    C, Hbound = lagrange_bounds(n, p, d, s)
    record.bounds = {
        "C": C,
        "Cprime": homotopy_bezout_number(BlockStructure((n, p)), lagrange_multidegrees(n, p, d)),
        "Hn": Hbound,
        "Hn_closed_form": lagrange_height_closed_form(n, p, d, s),
    }
    record.set_param(found.full)
    record.extra = {"u": list(found.u), "sigma": config.sigma}
    if found.projected is not None:
        interval = isolate_minimum(found.projected, config.sigma)
        record.extra["minimum"] = None if interval is None else [format_coefficient(x) for x in interval]
    return record


_COMMANDS = {
    "bounds": _cmd_bounds,
    "solve-modp": _cmd_solve_modp,
    "solve": _cmd_solve,
    "minimize": _cmd_minimize,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mhsolve", description="Exact multi-homogeneous polynomial system solver")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("-i", "--input", required=True, help="system file (JSON)")
        cmd.add_argument("-o", "--output", help="write the JSON record here instead of stdout")
        cmd.add_argument("--seed", type=int, help="random seed")
        cmd.add_argument("--repeat", type=int, help="independent runs (default 3)")
        cmd.add_argument("--threads", type=int, help="worker threads for series lifting")
        cmd.add_argument("--sigma", type=int, help="bits of precision for the minimum")
        cmd.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")
        cmd.add_argument("--env-file", help="dotenv file with MHSOLVE_* settings")
        if name == "solve-modp":
            cmd.add_argument("-p", "--prime", type=int, required=True, help="prime modulus")
        elif name in ("solve", "minimize"):
            cmd.add_argument("-p", "--prime-override", dest="prime", type=int,
                             help="use this prime instead of a random one (voids the probability bound)")
    return parser


def run_command(argv: Optional[Sequence[str]] = None, stdout=None) -> int:
    """Run one command; returns the exit code (0 success, 2 fail outcome, 1 usage or input error)."""
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1

    try:
        config = SolverConfig.from_env(args.env_file).with_overrides(
            seed=args.seed, repeat=args.repeat, threads=args.threads, sigma=args.sigma, log_level=args.log_level,
        )
    except MhsolveError as exc:
        print(f"mhsolve: {exc}", file=sys.stderr)
        return 1
    logging.basicConfig(
        level=config.log_level,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        stream=sys.stderr,
    )
    if getattr(args, "prime", None) is not None and args.command != "solve-modp":
        logger.warning("--prime-override %d in effect: the success probability bound no longer applies", args.prime)

    try:
        record = _COMMANDS[args.command](args, config)
    except MhsolveError as exc:
        logger.error("%s", exc)
        print(f"mhsolve: {exc}", file=sys.stderr)
        return 1

    if args.output:
        record.save(args.output)
    else:
        stdout.write(record.dumps())
    return Outcome(record.outcome).exit_code


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run_command(argv)


if __name__ == "__main__":
    sys.exit(main())
