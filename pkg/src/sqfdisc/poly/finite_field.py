"""Polynomials over the prime field F_p: irreducibility, root splitting, cycle types."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

_BRUTE_FORCE_ROOTS = 2000


def _trim(f: List[int]) -> List[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


@dataclass(frozen=True)
class FpPoly:
    """Polynomial over F_p, ascending coefficients reduced into [0, p)."""

    p: int
    coeffs: Tuple[int, ...]

    @classmethod
    def reduce(cls, f: Sequence, p: int) -> "FpPoly":
        """Reduction of an integer (or p-integral rational) polynomial mod p."""
        out = []
        for c in f:
            if isinstance(c, Fraction):
                if c.denominator % p == 0:
                    raise ZeroDivisionError(f"denominator divisible by {p}")
                out.append(c.numerator * pow(c.denominator, -1, p) % p)
            else:
                out.append(c % p)
        return cls(p, tuple(_trim(out)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.p
        return acc


def _mul(f: List[int], g: List[int], p: int) -> List[int]:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return _trim([c % p for c in out])


def _divmod(f: List[int], g: List[int], p: int) -> Tuple[List[int], List[int]]:
    r = list(f)
    dg = len(g) - 1
    if len(r) - 1 < dg:
        return [], r
    inv = pow(g[-1], -1, p)
    q = [0] * (len(r) - dg)
    for k in range(len(r) - 1 - dg, -1, -1):
        c = r[k + dg] * inv % p
        q[k] = c
        if c:
            for j, b in enumerate(g):
                r[k + j] = (r[k + j] - c * b) % p
    return _trim(q), _trim(r[:dg])


def _rem(f: List[int], g: List[int], p: int) -> List[int]:
    return _divmod(f, g, p)[1]


def _monic(f: List[int], p: int) -> List[int]:
    if not f:
        return f
    inv = pow(f[-1], -1, p)
    return [c * inv % p for c in f]


def _gcd(f: List[int], g: List[int], p: int) -> List[int]:
    while g:
        f, g = g, _rem(f, g, p)
    return _monic(f, p)


def _powmod(base: List[int], e: int, mod: List[int], p: int) -> List[int]:
    result = [1]
    base = _rem(base, mod, p)
    while e:
        if e & 1:
            result = _rem(_mul(result, base, p), mod, p)
        base = _rem(_mul(base, base, p), mod, p)
        e >>= 1
    return result


def _sub(f: List[int], g: List[int], p: int) -> List[int]:
    n = max(len(f), len(g))
    return _trim([((f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0)) % p for i in range(n)])


def _deriv(f: List[int], p: int) -> List[int]:
    return _trim([i * f[i] % p for i in range(1, len(f))])


def fp_is_squarefree(f: FpPoly) -> bool:
    g = _gcd(list(f.coeffs), _deriv(list(f.coeffs), f.p), f.p)
    return len(g) == 1


def fp_is_irreducible(f: FpPoly) -> bool:
    """Ben-Or test: gcd(f, x^(p^i) - x) = 1 for every i <= deg f / 2.

    >>> fp_is_irreducible(FpPoly.reduce([1, 0, 1], 3))
    True
    >>> fp_is_irreducible(FpPoly.reduce([1, 0, 1], 5))
    False
    """
    p, d = f.p, f.degree
    if d < 1:
        raise ValueError("irreducibility needs degree >= 1")
    if d == 1:
        return True
    g = _monic(list(f.coeffs), p)
    xp = [0, 1]
    for _ in range(d // 2):
        xp = _powmod(xp, p, g, p)
        if len(_gcd(g, _sub(xp, [0, 1], p), p)) > 1:
            return False
    return True


def _equal_degree_roots(g: List[int], p: int, rng: random.Random) -> List[int]:
    """Roots of a monic g that is a product of distinct linear factors."""
    if len(g) == 1:
        return []
    if len(g) == 2:
        return [(-g[0]) % p]
    if p == 2:
        return [x for x in range(2) if _eval(g, x, p) == 0]
    while True:
        a = rng.randrange(p)
        h = _powmod([a, 1], (p - 1) // 2, g, p)
        d = _gcd(g, _sub(h, [1], p), p)
        if 1 < len(d) < len(g):
            q, _ = _divmod(g, d, p)
            return _equal_degree_roots(d, p, rng) + _equal_degree_roots(_monic(q, p), p, rng)


def _eval(f: List[int], x: int, p: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


def fp_distinct_linear_split(f: FpPoly) -> Optional[List[int]]:
    """Sorted roots when f splits into deg f distinct linear factors mod p, else None.

    >>> fp_distinct_linear_split(FpPoly.reduce([-1, 0, 1], 5))
    [1, 4]
    """
    p, d = f.p, f.degree
    if d < 1:
        raise ValueError("need degree >= 1")
    g = _monic(list(f.coeffs), p)
    # f | x^p - x  iff  all roots in F_p and simple
    if _sub(_powmod([0, 1], p, g, p), _rem([0, 1], g, p), p):
        return None
    if p <= _BRUTE_FORCE_ROOTS:
        roots = [x for x in range(p) if _eval(g, x, p) == 0]
    else:
        roots = _equal_degree_roots(g, p, random.Random(p))
    return sorted(roots)


def fp_factor_degrees(f: FpPoly) -> Tuple[int, ...]:
    """Degrees of the irreducible factors of a squarefree f (distinct-degree factorization).

    >>> fp_factor_degrees(FpPoly.reduce([1, 0, 1], 5))
    (1, 1)
    """
    p = f.p
    if f.degree < 1:
        raise ValueError("need degree >= 1")
    if not fp_is_squarefree(f):
        raise ValueError("fp_factor_degrees needs a squarefree polynomial")
    g = _monic(list(f.coeffs), p)
    degrees: List[int] = []
    xp = [0, 1]
    d = 0
    while len(g) - 1 >= 2 * (d + 1):
        d += 1
        xp = _powmod(xp, p, g, p)
        h = _gcd(g, _sub(xp, [0, 1], p), p)
        if len(h) > 1:
            degrees += [d] * ((len(h) - 1) // d)
            g, _ = _divmod(g, h, p)
            g = _monic(g, p)
            xp = _rem(xp, g, p)
    if len(g) > 1:
        degrees.append(len(g) - 1)
    return tuple(sorted(degrees))
