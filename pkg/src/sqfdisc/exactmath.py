"""Exact integer substrate: primality, factorization, squarefree tests, CRT."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Sequence, Tuple, Union

DEFAULT_TRIAL_BOUND = 10**5
DEFAULT_RHO_BUDGET = 2 * 10**5

# Jaeschke/Sorenson-Webster: these 12 bases are a complete witness set below 3.3e24.
_DETERMINISTIC_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_DETERMINISTIC_LIMIT = 3317044064679887385961981
# 64 rounds of Miller-Rabin: error < 4^-64 = 2^-128 for composite inputs.
_PROBABILISTIC_ROUNDS = 64

PRIMALITY_DETERMINISTIC = "miller-rabin-deterministic"
PRIMALITY_PROBABILISTIC = "miller-rabin-64-rounds-error<2^-128"


def primes_up_to(limit: int) -> list[int]:
    """Sieve of Eratosthenes; primes p <= limit."""
    if limit < 2:
        return []
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, limit + 1, p)))
    return [i for i, flag in enumerate(sieve) if flag]


@lru_cache(maxsize=8)
def _small_primes(limit: int) -> Tuple[int, ...]:
    return tuple(primes_up_to(limit))


def _mr_round(m: int, d: int, s: int, a: int) -> bool:
    x = pow(a, d, m)
    if x == 1 or x == m - 1:
        return True
    for _ in range(s - 1):
        x = x * x % m
        if x == m - 1:
            return True
    return False


def is_prime(m: int) -> bool:
    """Primality test.

    Deterministic below 3.3e24 (in particular for every m < 2^64). Above that,
    64 Miller-Rabin rounds with bases drawn from a generator seeded by ``m``
    itself, so the answer is reproducible and a composite slips through with
    probability below 2^-128.

    >>> is_prime(2), is_prime(1), is_prime(10403)
    (True, False, False)
    """
    if m < 0:
        raise ValueError("is_prime expects m >= 0")
    if m < 2:
        return False
    for p in _small_primes(1000)[:60]:
        if m % p == 0:
            return m == p
    d, s = m - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if m < _DETERMINISTIC_LIMIT:
        return all(_mr_round(m, d, s, a) for a in _DETERMINISTIC_BASES)
    rng = random.Random(m)
    bases = list(_DETERMINISTIC_BASES)
    bases += [rng.randrange(2, m - 1) for _ in range(_PROBABILISTIC_ROUNDS - len(bases))]
    return all(_mr_round(m, d, s, a) for a in bases)


def primality_provenance(m: int) -> str:
    """Which guarantee ``is_prime`` gives for this magnitude."""
    return PRIMALITY_DETERMINISTIC if abs(m) < _DETERMINISTIC_LIMIT else PRIMALITY_PROBABILISTIC


def next_prime(m: int) -> int:
    """Smallest prime strictly greater than m."""
    c = max(m + 1, 2)
    while not is_prime(c):
        c += 1
    return c


def iter_primes(start: int = 2) -> Iterator[int]:
    """Primes >= start, in increasing order."""
    p = start - 1
    while True:
        p = next_prime(p)
        yield p


def integer_nth_root(m: int, k: int) -> int:
    """floor(m ** (1/k)) for m >= 0."""
    if m < 0:
        raise ValueError("negative radicand")
    if m < 2:
        return m
    x = 1 << ((m.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + m // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x**k > m:
        x -= 1
    while (x + 1) ** k <= m:
        x += 1
    return x


def perfect_power(m: int) -> Optional[Tuple[int, int]]:
    """(root, k) with root**k == m and k >= 2 maximal-prime, or None."""
    if m < 4:
        return None
    for k in primes_up_to(m.bit_length()):
        r = integer_nth_root(m, k)
        if r**k == m:
            return r, k
    return None


@dataclass(frozen=True)
class Factorization:
    """sign * prod(p**e) with primes strictly increasing."""

    sign: int
    factors: Tuple[Tuple[int, int], ...]

    @property
    def value(self) -> int:
        out = self.sign
        for p, e in self.factors:
            out *= p**e
        return out

    def exponent(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def to_json(self) -> list:
        return [[str(p), e] for p, e in self.factors]


@dataclass(frozen=True)
class Indeterminate:
    """Partial factorization: the budget ran out on a composite cofactor.

    ``known`` holds the prime powers that were split off; ``cofactors`` are
    composites (> 1) nobody managed to split.
    """

    sign: int
    known: Tuple[Tuple[int, int], ...]
    cofactors: Tuple[int, ...]

    @property
    def value(self) -> int:
        out = self.sign
        for p, e in self.known:
            out *= p**e
        for c in self.cofactors:
            out *= c
        return out

    def to_json(self) -> dict:
        return {
            "indeterminate": True,
            "known": [[str(p), e] for p, e in self.known],
            "cofactors": [str(c) for c in self.cofactors],
        }


FactorResult = Union[Factorization, Indeterminate]


def _pollard_brent(m: int, c: int, budget: int) -> Tuple[Optional[int], int]:
    """One Brent-rho run. Returns (nontrivial divisor or None, iterations used)."""
    y, r, q, g = 2, 1, 1, 1
    used = 0
    x = ys = y
    batch = 128
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % m
        used += r
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(batch, r - k)):
                y = (y * y + c) % m
                q = q * abs(x - y) % m
            g = math.gcd(q, m)
            k += batch
        used += min(r, k)
        r *= 2
        if used > budget and g == 1:
            return None, used
    if g == m:
        while True:
            ys = (ys * ys + c) % m
            g = math.gcd(abs(x - ys), m)
            if g > 1:
                break
    return (g if 1 < g < m else None), used


def _split(m: int, budget: int) -> Tuple[Optional[int], int]:
    """Find a nontrivial divisor of the composite m within ``budget`` rho steps."""
    pp = perfect_power(m)
    if pp is not None:
        return pp[0], 0
    spent = 0
    c = 1
    while spent < budget:
        d, used = _pollard_brent(m, c, budget - spent)
        spent += used
        if d is not None:
            return d, spent
        c += 1
    return None, spent


def factorize(
    m: int,
    trial_bound: int = DEFAULT_TRIAL_BOUND,
    rho_budget: int = DEFAULT_RHO_BUDGET,
) -> FactorResult:
    """Complete factorization of m != 0, or Indeterminate when the rho budget runs out.

    Trial division by primes up to ``trial_bound``, then Brent's variant of
    Pollard rho with at most ``rho_budget`` iterations in total.

    >>> factorize(-30)
    Factorization(sign=-1, factors=((2, 1), (3, 1), (5, 1)))
    """
    if m == 0:
        raise ValueError("cannot factorize 0")
    sign = -1 if m < 0 else 1
    m = abs(m)
    found: dict[int, int] = {}
    for p in _small_primes(trial_bound):
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            found[p] = e
    stack = [m] if m > 1 else []
    stuck: list[int] = []
    remaining = rho_budget
    while stack:
        c = stack.pop()
        if c <= trial_bound**2 or is_prime(c):
            # anything below trial_bound^2 left after trial division is prime
            found[c] = found.get(c, 0) + 1
            continue
        d, used = _split(c, remaining)
        remaining -= used
        if d is None:
            stuck.append(c)
            continue
        stack.extend((d, c // d))
    # Cofactors are multiplied back only for the stuck part; known ones are prime.
    known = tuple(sorted(found.items()))
    if stuck:
        return Indeterminate(sign, known, tuple(sorted(stuck)))
    return Factorization(sign, known)


def is_squarefree(
    m: int,
    trial_bound: int = DEFAULT_TRIAL_BOUND,
    rho_budget: int = DEFAULT_RHO_BUDGET,
) -> Optional[bool]:
    """True/False, or None when factorization is indeterminate and nothing decides it.

    A partial factorization can still prove non-squarefreeness: a repeated
    known prime, a square cofactor, or two stuck cofactors sharing a factor.
    """
    if m == 0:
        raise ValueError("0 is divisible by every square")
    res = factorize(m, trial_bound, rho_budget)
    return squarefree_from(res)


def squarefree_from(res: FactorResult) -> Optional[bool]:
    if isinstance(res, Factorization):
        return all(e == 1 for _, e in res.factors)
    if any(e > 1 for _, e in res.known):
        return False
    for i, c in enumerate(res.cofactors):
        r = math.isqrt(c)
        if r * r == c:
            return False
        for other in res.cofactors[i + 1 :]:
            if math.gcd(c, other) > 1:
                return False
        for p, _ in res.known:
            if c % p == 0:
                return False
    return None


def merge_factorizations(parts: Iterable[FactorResult]) -> FactorResult:
    """Factorization of the product of several factorizations."""
    sign = 1
    exps: dict[int, int] = {}
    stuck: list[int] = []
    for part in parts:
        sign *= part.sign
        primes = part.factors if isinstance(part, Factorization) else part.known
        for p, e in primes:
            exps[p] = exps.get(p, 0) + e
        if isinstance(part, Indeterminate):
            stuck.extend(part.cofactors)
    known = tuple(sorted(exps.items()))
    if stuck:
        return Indeterminate(sign, known, tuple(sorted(stuck)))
    return Factorization(sign, known)


def crt_solve(congruences: Sequence[Tuple[int, int]]) -> Tuple[int, int]:
    """Solve x = r_i (mod m_i); returns (x mod L, L) with L = lcm of the moduli.

    Non-coprime moduli are merged when consistent and rejected otherwise.

    >>> crt_solve([(1, 2), (2, 3)])
    (5, 6)
    """
    x, mod = 0, 1
    for r, m in congruences:
        if m < 1:
            raise ValueError(f"modulus must be >= 1, got {m}")
        g = math.gcd(mod, m)
        if (r - x) % g:
            raise ValueError(f"inconsistent congruences: {x} mod {mod} vs {r} mod {m}")
        # x + mod*k = r (mod m)  ->  k = (r-x)/g * inv(mod/g) mod m/g
        m_g = m // g
        k = ((r - x) // g) * pow(mod // g, -1, m_g) % m_g if m_g > 1 else 0
        x += mod * k
        mod = mod // g * m
        x %= mod
    return x, mod


def prime_divisors(m: int) -> list[int]:
    """Distinct primes dividing m (m small enough to factor fully)."""
    res = factorize(m)
    if isinstance(res, Indeterminate):
        raise ValueError(f"could not factor {m}")
    return [p for p, _ in res.factors]


def radical(m: int) -> int:
    return math.prod(prime_divisors(m)) if abs(m) > 1 else 1
