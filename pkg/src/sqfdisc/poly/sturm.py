"""Real root counting with Sturm sequences."""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .dense import (
    Number,
    derivative,
    monic_primitive,
    primitive_part,
    pseudo_rem,
    squarefree_part,
)


def _sign(x: Number) -> int:
    return (x > 0) - (x < 0)


def sturm_sequence(f: Sequence[Number]) -> list[list[int]]:
    """Sturm sequence of the squarefree part of f, kept integral.

    Each step uses a pseudo-remainder scaled by a positive constant, so sign
    patterns are those of the classical sequence.
    """
    f0 = squarefree_part(f)
    seq = [f0]
    if len(f0) <= 1:
        return seq
    seq.append(monic_primitive(derivative(f0)))
    while len(seq[-1]) > 1:
        a, b = seq[-2], seq[-1]
        r = pseudo_rem(a, b)
        # pseudo_rem multiplies by lc(b)^(deg a - deg b + 1); undo a negative sign
        e = len(a) - len(b) + 1
        if b[-1] < 0 and e % 2:
            r = [-c for c in r]
        if not r:
            break
        r = [-c for c in r]
        seq.append(primitive_part(r))
    return seq


def _variations(signs: list[int]) -> int:
    nz = [s for s in signs if s]
    return sum(1 for a, b in zip(nz, nz[1:]) if a != b)


def _signs_at(seq: list[list[int]], x: Optional[Fraction], at_minus_inf: bool) -> list[int]:
    if x is None:
        if at_minus_inf:
            return [_sign(p[-1]) * (-1 if (len(p) - 1) % 2 else 1) for p in seq]
        return [_sign(p[-1]) for p in seq]
    return [_sign_at_rational(p, x) for p in seq]


def _sign_at_rational(p: list[int], x: Fraction) -> int:
    # sign of den^deg * p(num/den), all in integers
    u, v = x.numerator, x.denominator
    acc = 0
    vp = 1
    for c in reversed(p):
        acc = acc * u + c * vp
        vp *= v
    return _sign(acc)


def real_root_count(
    f: Sequence[Number],
    lo: Optional[Number] = None,
    hi: Optional[Number] = None,
) -> int:
    """Number of distinct real roots of f in the open interval (lo, hi).

    ``None`` endpoints stand for -inf / +inf.

    >>> real_root_count([1, 0, 1])
    0
    >>> real_root_count([-6, 11, -6, 1])
    3
    >>> real_root_count([-6, 11, -6, 1], 1, 3)
    1
    """
    seq = sturm_sequence(f)
    if not seq or not seq[0]:
        raise ValueError("real_root_count of the zero polynomial")
    if len(seq[0]) == 1:
        return 0
    lo_f = None if lo is None else Fraction(lo)
    hi_f = None if hi is None else Fraction(hi)
    if lo_f is not None and hi_f is not None and lo_f >= hi_f:
        return 0
    v_lo = _variations(_signs_at(seq, lo_f, True))
    v_hi = _variations(_signs_at(seq, hi_f, False))
    count = v_lo - v_hi
    # V(lo) - V(hi) counts roots in (lo, hi]; drop a root sitting at hi.
    if hi_f is not None and _sign_at_rational(seq[0], hi_f) == 0:
        count -= 1
    return count
