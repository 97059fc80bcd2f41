"""Dense univariate polynomials over Z and Q.

A polynomial is a list of coefficients in ascending degree order, with no
trailing zeros; the zero polynomial is ``[]``. Coefficients are ``int`` or
``fractions.Fraction``. Functions never mutate their arguments.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import List, Sequence, Union

Number = Union[int, Fraction]
Poly = List[Number]


def normalize(f: Sequence[Number]) -> Poly:
    out = [c.numerator if isinstance(c, Fraction) and c.denominator == 1 else c for c in f]
    while out and out[-1] == 0:
        out.pop()
    return out


def degree(f: Sequence[Number]) -> int:
    """Degree; -1 for the zero polynomial."""
    return len(normalize(f)) - 1


def lc(f: Sequence[Number]) -> Number:
    return f[-1]


def add(f: Sequence[Number], g: Sequence[Number]) -> Poly:
    n = max(len(f), len(g))
    return normalize([(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(n)])


def sub(f: Sequence[Number], g: Sequence[Number]) -> Poly:
    return add(f, [-c for c in g])


def scale(f: Sequence[Number], c: Number) -> Poly:
    return normalize([c * x for x in f])


def mul(f: Sequence[Number], g: Sequence[Number]) -> Poly:
    if not f or not g:
        return []
    out: list = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            out[i + j] += a * b
    return normalize(out)


def from_roots(roots: Sequence[Number], lead: Number = 1) -> Poly:
    """lead * prod(x - r)."""
    out: Poly = [lead]
    for r in roots:
        out = mul(out, [-r, 1])
    return out


def derivative(f: Sequence[Number]) -> Poly:
    return normalize([i * f[i] for i in range(1, len(f))])


def integrate(f: Sequence[Number], constant: Number = 0) -> Poly:
    """Antiderivative with the given constant term."""
    return normalize([constant] + [Fraction(c) / (i + 1) for i, c in enumerate(f)])


def evaluate(f: Sequence[Number], x: Number) -> Number:
    acc: Number = 0
    for c in reversed(f):
        acc = acc * x + c
    return acc


def compose_scale(f: Sequence[Number], s: Number) -> Poly:
    """f(s*x)."""
    out = []
    power: Number = 1
    for c in f:
        out.append(c * power)
        power *= s
    return normalize(out)


def divmod_poly(f: Sequence[Number], g: Sequence[Number]) -> tuple[Poly, Poly]:
    """Euclidean division over Q."""
    g = normalize(g)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = [Fraction(c) for c in normalize(f)]
    dg = len(g) - 1
    if len(r) - 1 < dg:
        return [], normalize(r)
    q = [Fraction(0)] * (len(r) - dg)
    inv = Fraction(1) / g[-1]
    for k in range(len(r) - 1 - dg, -1, -1):
        coef = r[k + dg] * inv
        q[k] = coef
        if coef:
            for j, b in enumerate(g):
                r[k + j] -= coef * b
    return normalize(q), normalize(r[:dg])


def pseudo_rem(f: Sequence[int], g: Sequence[int]) -> Poly:
    """lc(g)^(deg f - deg g + 1) * f mod g, over Z."""
    r = list(normalize(f))
    g = normalize(g)
    dg = len(g) - 1
    if len(r) - 1 < dg:
        return r
    lead = g[-1]
    e = len(r) - 1 - dg + 1
    while r and len(r) - 1 >= dg:
        coef = r[-1]
        shift = len(r) - 1 - dg
        r = [lead * c for c in r]
        for j, b in enumerate(g):
            r[shift + j] -= coef * b
        r = normalize(r)
        e -= 1
    if e:
        r = [lead**e * c for c in r]
    return normalize(r)


def content(f: Sequence[int]) -> int:
    g = 0
    for c in f:
        g = math.gcd(g, c)
    return g


def primitive_part(f: Sequence[int]) -> Poly:
    """f / content, sign kept so that the leading coefficient sign is unchanged."""
    c = content(f)
    return [x // c for x in f] if c > 1 else list(f)


def clear_denominators(f: Sequence[Number]) -> tuple[Poly, int]:
    """(F, d) with F integral and F = d*f, d > 0 minimal."""
    d = 1
    for c in f:
        if isinstance(c, Fraction):
            d = d * c.denominator // math.gcd(d, c.denominator)
    return [int(c * d) for c in f], d


def is_integral(f: Sequence[Number]) -> bool:
    return all(not isinstance(c, Fraction) or c.denominator == 1 for c in f)


def to_int_poly(f: Sequence[Number]) -> List[int]:
    """Convert a rational polynomial with unit denominators to integers."""
    if not is_integral(f):
        raise ValueError("polynomial has non-integral coefficients")
    return [int(c) for c in normalize(f)]


def monic_primitive(f: Sequence[Number]) -> Poly:
    """Primitive integral polynomial with positive leading coefficient, same roots."""
    F, _ = clear_denominators(normalize(f))
    F = primitive_part(F)
    if F and F[-1] < 0:
        F = [-c for c in F]
    return F


def gcd_poly(f: Sequence[Number], g: Sequence[Number]) -> Poly:
    """Primitive gcd over Q (integral, positive leading coefficient), via primitive PRS."""
    a, b = monic_primitive(f), monic_primitive(g)
    if not a:
        return b
    if not b:
        return a
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = pseudo_rem(a, b)
        a, b = b, monic_primitive(r)
    return monic_primitive(a)


def exact_div(f: Sequence[Number], g: Sequence[Number]) -> Poly:
    q, r = divmod_poly(f, g)
    if r:
        raise ArithmeticError("division is not exact")
    return q


def squarefree_part(f: Sequence[Number]) -> Poly:
    """f / gcd(f, f'), primitive with positive leading coefficient."""
    f = monic_primitive(f)
    if len(f) <= 2:
        return f
    g = gcd_poly(f, derivative(f))
    if len(g) == 1:
        return f
    return monic_primitive(exact_div(f, g))


def to_json(f: Sequence[Number]) -> list[str]:
    """Ascending coefficients as strings (rationals as "num/den")."""
    return [str(c) for c in normalize(f)]


def from_json(items: Sequence[str]) -> Poly:
    return normalize([Fraction(s) if "/" in str(s) else int(s) for s in items])
