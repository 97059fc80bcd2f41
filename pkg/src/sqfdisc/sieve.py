"""Local squarefree densities of products of linear forms, and Brakenhoff's a_p.

For a factor c*x + d with p not dividing c the condition c*x + d = 0 mod p^2
pins down exactly one residue, so a(p) = 1 - k/p^2 unless two factors share a
root mod p (p | c_i d_j - c_j d_i) or p divides some c_i.  Those exceptional
primes are handled by exact counting.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as cartesian
from typing import Dict, Optional, Sequence, Set, Tuple, Union

from . import poly
from .exactmath import DEFAULT_TRIAL_BOUND, Factorization, factorize, is_prime, primes_up_to
from .family import LinearFactorSystem

ENUMERATION_THRESHOLD = 97
DEFAULT_WORK_LIMIT = 10**6

ENUMERATION = "enumeration"
CLOSED_FORM = "closed_form"
ROOT_COUNT = "root_count"


@dataclass(frozen=True)
class LocalDensity:
    p: int
    value: Fraction
    method: str

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "a_p_exact": _frac_str(self.value),
            "a_p_decimal": f"{float(self.value):.12f}",
            "method": self.method,
        }


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _factors(system) -> Tuple[Tuple[int, int], ...]:
    if isinstance(system, LinearFactorSystem):
        facs = system.factors
    else:
        facs = tuple(system)
    out = []
    for c, d in facs:
        if isinstance(c, Fraction) or isinstance(d, Fraction):
            if Fraction(c).denominator != 1 or Fraction(d).denominator != 1:
                raise ValueError("densities need integer linear forms")
        out.append((int(c), int(d)))
    return tuple(out)


def check_squarefree_system(factors: Sequence[Tuple[int, int]]) -> None:
    """Reject constant factors and proportional pairs (repeated roots)."""
    for c, _ in factors:
        if c == 0:
            raise ValueError("constant factor in system")
    for i in range(len(factors)):
        for j in range(i + 1, len(factors)):
            (ci, di), (cj, dj) = factors[i], factors[j]
            if ci * dj - cj * di == 0:
                raise ValueError(f"factors {i} and {j} share a root: system is not squarefree")


def exceptional_primes(system) -> Set[int]:
    """Primes dividing some c_i or some c_i d_j - c_j d_i (may be indeterminate for huge values)."""
    factors = _factors(system)
    out: Set[int] = set()
    values = [c for c, _ in factors] + _cross_determinants(factors)
    for v in values:
        if v == 0:
            continue
        res = factorize(v)
        out.update(p for p, _ in (res.factors if isinstance(res, Factorization) else res.known))
    return out


def _vp(m: int, p: int) -> int:
    """p-adic valuation capped at 2 (0 counts as divisible)."""
    if m % (p * p) == 0:
        return 2
    return 1 if m % p == 0 else 0


def _killed(factors: Sequence[Tuple[int, int]], p: int):
    """Residues x mod p^2 with A(x) = 0 mod p^2, as (classes mod p, single residues mod p^2).

    Returns None when every residue is killed.  Each factor contributes its
    content valuation everywhere, plus valuation >= 1 on one class mod p and
    >= 2 on one residue mod p^2 when p does not divide its reduced slope.
    """
    m = p * p
    base = 0
    roots = []  # (root mod p, root mod p^2 or None)
    for c, d in factors:
        e = min(_vp(c, p), _vp(d, p))
        if e == 2:
            return None
        base += e
        if e == 1:
            c, d = c // p, d // p
        if c % p == 0:
            continue
        inv = pow(c, -1, m)
        roots.append(((-d * inv) % p, (-d * inv) % m if e == 0 else None))
    need = 2 - base
    if need <= 0:
        return None
    by_class: Dict[int, list] = {}
    for r, R in roots:
        by_class.setdefault(r, []).append(R)
    if need == 1:
        return set(by_class), set()
    classes = {r for r, Rs in by_class.items() if len(Rs) >= 2}
    singles = {Rs[0] for r, Rs in by_class.items() if len(Rs) == 1}
    return classes, singles


def _killed_count(factors, p: int, units_only: bool = False) -> int:
    m = p * p
    k = _killed(factors, p)
    if k is None:
        return m - p if units_only else m
    classes, singles = k
    if units_only:
        return p * sum(1 for r in classes if r) + sum(1 for x in singles if x % p)
    return p * len(classes) + len(singles)


def _univariate_exact(factors, p: int) -> Fraction:
    return Fraction(p * p - _killed_count(factors, p), p * p)


def _univariate_enumerate(factors, p: int) -> Fraction:
    m = p * p
    good = 0
    for x in range(m):
        v = 1
        for c, d in factors:
            v = v * (c * x + d) % m
        good += v != 0
    return Fraction(good, m)


def _cross_determinants(factors) -> list:
    return [
        ci * dj - cj * di for i, (ci, di) in enumerate(factors) for (cj, dj) in factors[i + 1 :]
    ]


def _is_exceptional(factors, p: int) -> bool:
    return any(c % p == 0 for c, _ in factors) or any(D % p == 0 for D in _cross_determinants(factors))


def local_density_univariate(system, p: int, threshold: int = ENUMERATION_THRESHOLD) -> LocalDensity:
    """a(p) = #{x mod p^2 : A(x) != 0 mod p^2} / p^2.

    >>> local_density_univariate([(1, 0), (1, 1)], 2).value
    Fraction(1, 2)
    """
    factors = _factors(system)
    check_squarefree_system(factors)
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p <= threshold:
        return LocalDensity(p, _univariate_enumerate(factors, p), ENUMERATION)
    if _is_exceptional(factors, p):
        return LocalDensity(p, _univariate_exact(factors, p), ROOT_COUNT)
    return LocalDensity(p, 1 - Fraction(len(factors), p * p), CLOSED_FORM)


def _bivariate_enumerate(factors, n: int, p: int) -> Fraction:
    m = p * p
    good = 0
    for y in range(m):
        yn = pow(y, n, m)
        for x in range(m):
            if x % p == 0 and y % p == 0:
                continue
            v = 1
            for c, d in factors:
                v = v * (c * x + d * yn) % m
            good += v != 0
    return Fraction(good, m * m - m)


def _bivariate_exact(factors, n: int, p: int) -> Fraction:
    # y a unit: x -> y^n x is a bijection, reducing to the univariate count.
    m = p * p
    killed = (m - p) * _killed_count(factors, p)
    # y divisible by p: only x coprime to p is allowed.
    for j in range(p):
        yn = pow(j * p, n, m)
        killed += _killed_count([(c, d * yn) for c, d in factors], p, units_only=True)
    return Fraction(m * m - m - killed, m * m - m)


def local_density_bivariate(
    system, n: int, t: int, p: int, threshold: int = ENUMERATION_THRESHOLD
) -> LocalDensity:
    """Density of locally coprime (x, y) mod p^2 with A(x, y^n) != 0 mod p^2.

    Normalised by the p^4 - p^2 pairs not both divisible by p.  For p | t the
    univariate density of A(x, 1) is returned instead.
    """
    factors = _factors(system)
    check_squarefree_system(factors)
    if t < 1 or n < 1:
        raise ValueError("need n >= 1 and t >= 1")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if t % p == 0:
        return local_density_univariate(factors, p, threshold)
    if p <= min(threshold, 31):
        return LocalDensity(p, _bivariate_enumerate(factors, n, p), ENUMERATION)
    if _is_exceptional(factors, p):
        return LocalDensity(p, _bivariate_exact(factors, n, p), ROOT_COUNT)
    return LocalDensity(p, 1 - Fraction(len(factors), p * (p + 1)), CLOSED_FORM)


@dataclass(frozen=True)
class SieveProfile:
    system: LinearFactorSystem
    variant: Tuple  # ("univariate",) or ("bivariate", n, t)
    densities: Dict[int, LocalDensity]
    cutoff: int
    tail_bound: Fraction
    product_lower: Fraction
    product_upper: Fraction

    def to_json(self) -> dict:
        return {
            "variant": list(self.variant),
            "cutoff": self.cutoff,
            "tail_bound": _frac_str(self.tail_bound),
            "product_lower": _frac_str(self.product_lower),
            "product_upper": _frac_str(self.product_upper),
            "product_lower_decimal": f"{float(self.product_lower):.12f}",
            "product_upper_decimal": f"{float(self.product_upper):.12f}",
            "densities": [self.densities[p].to_json() for p in sorted(self.densities)],
        }


def _large_exceptional(factors, cutoff: int) -> Tuple[Set[int], int]:
    """Exceptional primes above the cutoff, and a count bound for those factoring could not find.

    Unsplit cofactors have every prime factor above the trial-division bound,
    so a cofactor C contributes at most log(C)/log(bound) further primes.
    """
    found: Set[int] = set()
    missing = 0
    for v in [c for c, _ in factors] + _cross_determinants(factors):
        res = factorize(v)
        if isinstance(res, Factorization):
            found.update(p for p, _ in res.factors if p > cutoff)
        else:
            found.update(p for p, _ in res.known if p > cutoff)
            missing += sum(C.bit_length() // (DEFAULT_TRIAL_BOUND.bit_length() - 1) for C in res.cofactors)
    return found, missing


def sieve_profile(system, cutoff: int, variant: Tuple = ("univariate",)) -> SieveProfile:
    """Exact a(p) for p <= cutoff and for exceptional p beyond it, with a tail bound.

    A non-exceptional p beyond the cutoff has 1 - k/p^2 <= a(p) <= 1 (in the
    bivariate form 1 - k/(p(p+1)) is larger still), and the sum of m^-2 over
    m > cutoff is below 1/cutoff.  At an exceptional prime at most k classes
    mod p die, so a(p) >= 1 - k/p; that covers primes hidden in cofactors
    that could not be split.
    """
    factors = _factors(system)
    if not isinstance(system, LinearFactorSystem):
        system = LinearFactorSystem(1, factors)
    check_squarefree_system(factors)
    if variant[0] == "univariate":
        density = lambda p: local_density_univariate(factors, p)  # noqa: E731
    elif variant[0] == "bivariate":
        _, n, t = variant
        density = lambda p: local_density_bivariate(factors, n, t, p)  # noqa: E731
    else:
        raise ValueError(f"unknown variant {variant!r}")
    large, missing = _large_exceptional(factors, cutoff)
    primes = sorted(set(primes_up_to(cutoff)) | large)
    densities = {p: density(p) for p in primes}
    upper = math.prod((d.value for d in densities.values()), start=Fraction(1))
    k = len(factors)
    tail = Fraction(k, cutoff)
    lower = upper * max(Fraction(0), 1 - tail)
    if missing:
        lower *= max(Fraction(0), 1 - Fraction(k, DEFAULT_TRIAL_BOUND)) ** missing
    return SieveProfile(system, tuple(variant), densities, cutoff, tail, lower, upper)


def truncated_product(profile_or_system, cutoff: Optional[int] = None) -> Tuple[Fraction, Fraction]:
    """(lower, upper) bracketing the full product over all primes.

    >>> lo, hi = truncated_product([(1, 0)], 100)
    >>> hi - lo <= hi / 100
    True
    """
    variant: Tuple = ("univariate",)
    if isinstance(profile_or_system, SieveProfile):
        if cutoff is None or cutoff == profile_or_system.cutoff:
            return profile_or_system.product_lower, profile_or_system.product_upper
        variant = profile_or_system.variant
        profile_or_system = profile_or_system.system
    if cutoff is None:
        raise ValueError("cutoff required")
    prof = sieve_profile(profile_or_system, cutoff, variant)
    return prof.product_lower, prof.product_upper


def brakenhoff_density(n: int, p: int) -> Fraction:
    """Probability that a random monic degree-n discriminant is not divisible by p^2.

    >>> brakenhoff_density(3, 3)
    Fraction(22, 27)
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    p = Fraction(p)
    if p == 2:
        return Fraction(1, 2)
    if n == 2:
        return 1 - 1 / p**2
    if n == 3:
        return 1 - 2 / p**2 + 1 / p**3
    return 1 - 1 / p + (p - 1) ** 2 * (1 - (-p) ** (2 - n)) / (p**2 * (p + 1))


@dataclass(frozen=True)
class SampleEstimate:
    mean: float
    stderr: float
    count: int
    hits: int


def _disc_mod(coeffs: Sequence[int], m: int) -> int:
    return poly.discriminant(list(coeffs) + [1]) % m


def brakenhoff_empirical(
    n: int,
    p: int,
    exhaustive: bool = True,
    samples: int = 10000,
    seed: int = 0,
    work_limit: int = DEFAULT_WORK_LIMIT,
) -> Union[Fraction, SampleEstimate]:
    """Fraction of monic degree-n polynomials mod p^2 whose discriminant is not 0 mod p^2.

    Exhaustive mode walks all p^(2n) coefficient tuples and is exact; sampling
    draws uniform tuples and reports mean and binomial standard error.
    """
    if n < 2 or not is_prime(p):
        raise ValueError("need n >= 2 and p prime")
    m = p * p
    if exhaustive:
        total = m**n
        if total > work_limit:
            raise OverflowError(f"{total} tuples exceed the work limit {work_limit}")
        good = sum(_disc_mod(c, m) != 0 for c in cartesian(range(m), repeat=n))
        return Fraction(good, total)
    rng = random.Random(seed)
    hits = 0
    for _ in range(samples):
        hits += _disc_mod([rng.randrange(m) for _ in range(n)], m) != 0
    f = hits / samples
    return SampleEstimate(f, math.sqrt(f * (1 - f) / samples), samples, hits)
