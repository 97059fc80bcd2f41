"""The family P_{a,b} = b + integral of n(x - a_1/n)(x - a_2)...(x - a_{n-1}).

Its discriminant factors as a product of linear forms in b, one per critical
point, which is what makes squarefree sieving on it tractable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Tuple

from . import poly
from .poly.dense import Number


@dataclass(frozen=True)
class Interval:
    """Open interval (lo, hi); ``None`` means unbounded on that side."""

    lo: Optional[Fraction]
    hi: Optional[Fraction]

    def __contains__(self, x: Number) -> bool:
        return (self.lo is None or x > self.lo) and (self.hi is None or x < self.hi)

    @property
    def bounded(self) -> bool:
        return self.lo is not None and self.hi is not None

    def width(self) -> Optional[Fraction]:
        return self.hi - self.lo if self.bounded else None

    def scaled(self, k: Number) -> "Interval":
        """k * I for k > 0."""
        return Interval(
            None if self.lo is None else self.lo * k,
            None if self.hi is None else self.hi * k,
        )

    def to_json(self) -> list:
        return [
            "-inf" if self.lo is None else str(self.lo),
            "inf" if self.hi is None else str(self.hi),
        ]

    @classmethod
    def from_json(cls, items: Sequence[str]) -> "Interval":
        lo, hi = items
        return cls(
            None if lo == "-inf" else Fraction(lo),
            None if hi == "inf" else Fraction(hi),
        )


@dataclass(frozen=True)
class FamilyParams:
    n: int
    a: Tuple[int, ...]
    b_residue: int = 0
    b_modulus: int = 1
    b_interval: Optional[Interval] = None
    q: int = 1

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if len(self.a) != self.n - 1:
            raise ValueError(f"need {self.n - 1} parameters a_i, got {len(self.a)}")
        if self.b_modulus < 1:
            raise ValueError("b modulus must be >= 1")

    def admits(self, b: int) -> bool:
        """b is in the congruence class and (if set) the interval."""
        if (b - self.b_residue) % self.b_modulus:
            return False
        return self.b_interval is None or b in self.b_interval

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "a": [str(x) for x in self.a],
            "b_residue": str(self.b_residue),
            "b_modulus": str(self.b_modulus),
            "q": str(self.q),
            "b_interval": None if self.b_interval is None else self.b_interval.to_json(),
        }

    @classmethod
    def from_json(cls, d: dict) -> "FamilyParams":
        return cls(
            n=int(d["n"]),
            a=tuple(int(x) for x in d["a"]),
            b_residue=int(d.get("b_residue", 0)),
            b_modulus=int(d.get("b_modulus", 1)),
            b_interval=None if d.get("b_interval") is None else Interval.from_json(d["b_interval"]),
            q=int(d.get("q", 1)),
        )


@dataclass(frozen=True)
class CriticalData:
    v1: Number  # n^n * P_{a,0}(a_1/n)
    v: Tuple[Number, ...]  # P_{a,0}(a_i), i = 2..n-1
    critical_points: Tuple[Fraction, ...]
    integral: bool


@dataclass(frozen=True)
class LinearFactorSystem:
    """Delta_{a,b} = sign * prod(c_i * b + d_i)."""

    sign: int
    factors: Tuple[Tuple[int, Number], ...]
    integral: bool = True

    @property
    def k(self) -> int:
        return len(self.factors)

    def values(self, b: Number) -> list:
        return [c * b + d for c, d in self.factors]

    def evaluate(self, b: Number) -> Number:
        return self.sign * math.prod(self.values(b))

    def roots(self) -> list[Fraction]:
        """The b where some factor vanishes, i.e. -d_i / c_i."""
        return [Fraction(-d) / c for c, d in self.factors]

    def substitute(self, t: int, r: int) -> "LinearFactorSystem":
        """System in u for b = t*u + r."""
        return LinearFactorSystem(
            self.sign, tuple((c * t, c * r + d) for c, d in self.factors), self.integral
        )

    def pairwise_coprime(self) -> bool:
        """No two factors share a root (condition (v) as polynomials in b)."""
        roots = self.roots()
        return len(set(roots)) == len(roots)

    def to_json(self) -> dict:
        return {"sign": self.sign, "factors": [[str(c), str(d)] for c, d in self.factors]}


def _check(n: int, a: Sequence[Number]) -> None:
    if n < 2:
        raise ValueError("n must be >= 2")
    if len(a) != n - 1:
        raise ValueError(f"need {n - 1} parameters a_i, got {len(a)}")


def build_Q(n: int, a: Sequence[Number]) -> poly.Poly:
    """Q_a = (n x - a_1)(x - a_2)...(x - a_{n-1}).

    >>> build_Q(3, (3, 1))
    [3, -6, 3]
    """
    _check(n, a)
    out = [-a[0], n]
    for ai in a[1:]:
        out = poly.mul(out, [-ai, 1])
    return poly.normalize(out)


def build_P(n: int, a: Sequence[Number], b: Number = 0) -> poly.Poly:
    """P_{a,b}: monic of degree n, constant term b, derivative Q_a."""
    return poly.integrate(build_Q(n, a), b)


def critical_values(n: int, a: Sequence[Number]) -> CriticalData:
    P0 = build_P(n, a, 0)
    points = (Fraction(a[0], n) if isinstance(a[0], int) else Fraction(a[0]) / n,) + tuple(
        Fraction(x) for x in a[1:]
    )
    v1 = n**n * poly.evaluate(P0, points[0])
    v = tuple(poly.evaluate(P0, x) for x in points[1:])
    vals = [v1, *v]
    integral = all(not isinstance(x, Fraction) or x.denominator == 1 for x in vals)
    norm = lambda x: int(x) if not isinstance(x, Fraction) or x.denominator == 1 else x  # noqa: E731
    return CriticalData(norm(v1), tuple(norm(x) for x in v), points, integral)


def _sample_point(factors: Sequence[Tuple[int, Number]]) -> int:
    roots = {Fraction(-d) / c for c, d in factors}
    b0 = 0
    while b0 in roots:
        b0 += 1
    return b0


def disc_linear_factorization(n: int, a: Sequence[Number]) -> LinearFactorSystem:
    """Factors [(n^n, v1), (1, v_2), ..., (1, v_{n-1})] with the sign fixed by one evaluation.

    The sign comes from comparing against the subresultant discriminant at the
    smallest nonnegative integer b avoiding every root of the product.
    """
    crit = critical_values(n, a)
    factors = ((n**n, crit.v1),) + tuple((1, v) for v in crit.v)
    b0 = _sample_point(factors)
    direct = poly.discriminant(build_P(n, a, b0))
    product = math.prod(c * b0 + d for c, d in factors)
    ratio = Fraction(direct) / product
    if ratio not in (1, -1):
        raise ArithmeticError(f"discriminant/product ratio {ratio} is not a sign")
    return LinearFactorSystem(int(ratio), factors, crit.integral)


def check_identity(n: int, a: Sequence[Number], b_samples: Iterable[Number]) -> bool:
    """Direct discriminant equals sign * product at every sample b."""
    system = disc_linear_factorization(n, a)
    for b in b_samples:
        if poly.discriminant(build_P(n, a, b)) != system.evaluate(b):
            return False
    return True
