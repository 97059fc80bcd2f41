"""Resultants and discriminants by the subresultant PRS."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .dense import Number, clear_denominators, content, derivative, normalize, pseudo_rem


def _resultant_int(A: list[int], B: list[int]) -> int:
    # Collins-Brown subresultant algorithm (Cohen, GTM 138, Alg. 3.3.7).
    da, db = len(A) - 1, len(B) - 1
    s = 1
    if da < db:
        A, B = B, A
        da, db = db, da
        if da * db % 2:
            s = -1
    if db == 0:
        return s * B[0] ** da
    ca, cb = content(A), content(B)
    if A[-1] < 0:
        ca = -ca
    if B[-1] < 0:
        cb = -cb
    A = [c // ca for c in A]
    B = [c // cb for c in B]
    t = ca**db * cb**da
    g = h = 1
    while True:
        da, db = len(A) - 1, len(B) - 1
        delta = da - db
        if da % 2 and db % 2:
            s = -s
        R = pseudo_rem(A, B)
        if not R:
            return 0
        A = B
        div = g * h**delta
        B = [c // div for c in R]
        g = A[-1]
        h = g**delta // h ** (delta - 1) if delta >= 1 else h
        if len(B) == 1:
            da = len(A) - 1
            h = B[0] ** da // h ** (da - 1) if da >= 1 else h
            return s * t * h


def resultant(P: Sequence[Number], Q: Sequence[Number]) -> Number:
    """Res(P, Q) = lc(P)^deg Q * prod_{P(alpha)=0} Q(alpha), exactly.

    Rational inputs are scaled to integral ones first.

    >>> resultant([-2, 1], [-5, 1])
    -3
    >>> resultant([-1, 0, 1], [-4, 0, 1])
    9
    """
    P, Q = normalize(P), normalize(Q)
    if not P or not Q:
        raise ValueError("resultant of the zero polynomial")
    Pi, dp = clear_denominators(P)
    Qi, dq = clear_denominators(Q)
    r = _resultant_int(Pi, Qi)
    scale = dp ** (len(Q) - 1) * dq ** (len(P) - 1)
    if scale == 1:
        return r
    out = Fraction(r, scale)
    return out.numerator if out.denominator == 1 else out


def discriminant(P: Sequence[Number]) -> Number:
    """Discriminant of a monic polynomial, (-1)^(n(n-1)/2) Res(P, P').

    >>> discriminant([1, 3, 1])
    5
    >>> discriminant([0, -1, 0, 1])
    4
    """
    P = normalize(P)
    n = len(P) - 1
    if n < 2:
        raise ValueError("discriminant needs degree >= 2")
    if P[-1] != 1:
        raise ValueError("discriminant is only defined here for monic polynomials")
    r = resultant(P, derivative(P))
    return -r if (n * (n - 1) // 2) % 2 else r
