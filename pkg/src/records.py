"""
Output records for mhsolve.
Serializes parametrizations, bound reports and run metadata to JSON with
exact coefficients written as strings ("n" or "n/d").
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional

from .ring import QQ, Domain, PrimeField, poly_convert
from .zdp import ZeroDimParam


def format_coefficient(c) -> str:
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def parse_coefficient(text: str) -> Fraction:
    return Fraction(text)


def domain_name(K: Domain) -> str:
    if isinstance(K, PrimeField):
        return f"GF({K.p})"
    return "QQ"


def domain_from_name(name: str) -> Domain:
    if name.startswith("GF(") and name.endswith(")"):
        return PrimeField(int(name[3:-1]))
    if name == "QQ":
        return QQ
    raise ValueError(f"unknown domain {name!r}")


@dataclass
class OutputRecord:
    """One command result: parametrization, bounds and run metadata."""
    command: str
    outcome: str
    domain: str = "QQ"
    lam: List[int] = field(default_factory=list)
    q: List[str] = field(default_factory=list)
    v: List[List[str]] = field(default_factory=list)
    variables: List[str] = field(default_factory=list)
    bounds: Optional[Dict[str, Any]] = None
    seed: Optional[int] = None
    primes: List[int] = field(default_factory=list)
    repeats: Optional[int] = None
    run_degrees: List[Optional[int]] = field(default_factory=list)
    extra: Dict[str, Any] = field(default_factory=dict)

    @property
    def degree(self) -> Optional[int]:
        return len(self.q) - 1 if self.q else None

    def set_param(self, P: Optional[ZeroDimParam]):
        """Store a parametrization (or clear it)."""
        if P is None:
            self.q, self.v, self.lam = [], [], []
            return
        self.domain = domain_name(P.domain)
        self.lam = [int(c) for c in P.lam]
        self.q = [format_coefficient(c) for c in P.q]
        self.v = [[format_coefficient(c) for c in vi] for vi in P.v]

    def param(self) -> Optional[ZeroDimParam]:
        """The stored parametrization, rebuilt over its domain."""
        if not self.q:
            return None
        K = domain_from_name(self.domain)
        q = poly_convert((parse_coefficient(c) for c in self.q), K)
        v = tuple(poly_convert((parse_coefficient(c) for c in vi), K) for vi in self.v)
        return ZeroDimParam(q, v, tuple(self.lam), K)

    def to_dict(self) -> Dict:
        """Convert to dictionary for serialization."""
        return {
            "command": self.command,
            "outcome": self.outcome,
            "domain": self.domain,
            "degree": self.degree,
            "lambda": self.lam,
            "q": self.q,
            "v": self.v,
            "variables": self.variables,
            "bounds": self.bounds,
            "seed": self.seed,
            "primes": self.primes,
            "repeats": self.repeats,
            "run_degrees": self.run_degrees,
            "extra": self.extra,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "OutputRecord":
        """Create from dictionary."""
        return cls(
            command=data["command"],
            outcome=data["outcome"],
            domain=data.get("domain", "QQ"),
            lam=list(data.get("lambda", [])),
            q=list(data.get("q", [])),
            v=[list(vi) for vi in data.get("v", [])],
            variables=list(data.get("variables", [])),
            bounds=data.get("bounds"),
            seed=data.get("seed"),
            primes=list(data.get("primes", [])),
            repeats=data.get("repeats"),
            run_degrees=list(data.get("run_degrees", [])),
            extra=dict(data.get("extra", {})),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def loads(cls, text: str) -> "OutputRecord":
        return cls.from_dict(json.loads(text))

    def save(self, path):
        Path(path).write_text(self.dumps(), encoding="utf-8")

    @classmethod
    def load(cls, path) -> "OutputRecord":
        return cls.loads(Path(path).read_text(encoding="utf-8"))
