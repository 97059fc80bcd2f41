"""Choosing a = (a_1, ..., a_{n-1}) and the b-congruences.

The searches produce explicit witnesses (primes p0, p1, p2, an auxiliary
tuple a') and every conclusion drawn from them is re-verified exactly rather
than trusted.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import poly
from .exactmath import crt_solve, is_prime, iter_primes, primes_up_to, radical
from .family import FamilyParams, Interval, build_P, critical_values, disc_linear_factorization
from .poly import FpPoly

Congruence = Tuple[int, int]


class ScanExhausted(RuntimeError):
    """A prime scan hit its limit before finding a witness."""


class BudgetExhausted(RuntimeError):
    """The signature direction search ran out of candidates."""


def eisenstein_R(n: int, p0: int) -> List[int]:
    """R = x^n - p0^(n-1) x + p0."""
    R = [0] * (n + 1)
    R[0] = p0
    R[1] = -(p0 ** (n - 1))
    R[n] += 1
    return R


def _smallest_prime_not_dividing(m: int) -> int:
    for p in iter_primes():
        if m % p:
            return p
    raise AssertionError("unreachable")


def find_eisenstein_pair(
    n: int, S: Sequence[int] = (), scan_limit: int = 10**5
) -> Tuple[int, int, List[int]]:
    """(p0, p1, roots of R' mod p1).

    p0 is the smallest prime not dividing n(n-1); p1 is the smallest prime
    outside S and greater than n for which R is irreducible and R' has n-1
    distinct roots mod p1. ``scan_limit`` caps the number of primes tried.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    p0 = _smallest_prime_not_dividing(n * (n - 1))
    R = eisenstein_R(n, p0)
    Rp = poly.derivative(R)
    excluded = set(S)
    for count, p in enumerate(iter_primes(n + 1)):
        if count >= scan_limit:
            break
        if p in excluded:
            continue
        roots = poly.fp_distinct_linear_split(FpPoly.reduce(Rp, p))
        if roots is None or len(roots) != n - 1:
            continue
        if poly.fp_is_irreducible(FpPoly.reduce(R, p)):
            return p0, p, roots
    raise ScanExhausted(f"no p1 among the first {scan_limit} primes above {n}")


def _critical_values_plain(n: int, a: Sequence) -> List[Fraction]:
    """P_{a,0} at its critical points a_1/n, a_2, ..., unscaled."""
    crit = critical_values(n, a)
    return [Fraction(crit.v1) / n**n] + [Fraction(v) for v in crit.v]


def _pairwise_distinct(vals: Sequence) -> bool:
    return len(set(vals)) == len(vals)


def find_distinct_value_tuple(n: int, attempts: int = 1000, seed: int = 0) -> Tuple[int, ...]:
    """An integer tuple a' whose critical values are pairwise distinct.

    Critical points a'_1/n < a'_2 < ... are spread with growing gaps (1, 2, 4,
    7, ...) first, since evenly spaced points give a symmetric polynomial with
    repeated critical values; random increasing tuples follow if needed.
    """
    if n == 2:
        return (1,)
    pts = [1 + j * (j + 1) // 2 for j in range(n - 1)]
    candidates = [pts]
    rng = random.Random(seed)
    for _ in range(attempts):
        gaps = [rng.randint(1, 4 * n) for _ in range(n - 2)]
        start = rng.randint(-2 * n, 2 * n)
        candidates.append(list(itertools.accumulate([start] + gaps)))
    for c in candidates:
        a = (n * c[0],) + tuple(c[1:])
        if _pairwise_distinct(_critical_values_plain(n, a)):
            return a
    raise ScanExhausted("no tuple with distinct critical values found")


def _reduce_mod(x: Fraction, p: int) -> Optional[int]:
    if x.denominator % p == 0:
        return None
    return x.numerator * pow(x.denominator, -1, p) % p


def find_p2(
    n: int, a_prime: Sequence, S: Sequence[int], p1: int, scan_limit: int = 10**5
) -> int:
    """Smallest prime outside S, above n, different from p1, separating the critical values of a'."""
    vals = _critical_values_plain(n, a_prime)
    if not _pairwise_distinct(vals):
        raise ValueError("critical values of a' are not pairwise distinct")
    excluded = set(S) | {p1}
    for count, p in enumerate(iter_primes(n + 1)):
        if count >= scan_limit:
            break
        if p in excluded:
            continue
        red = [_reduce_mod(v, p) for v in vals]
        if None in red:
            continue
        a_red = [_reduce_mod(Fraction(x), p) for x in a_prime]
        if None in a_red:
            continue
        if _pairwise_distinct(red):
            return p
    raise ScanExhausted(f"no p2 among the first {scan_limit} primes above {n}")


@dataclass(frozen=True)
class ParamCertificate:
    n: int
    p0: int
    p1: int
    R: Tuple[int, ...]
    rprime_roots: Tuple[int, ...]
    a_prime: Tuple[int, ...]
    p2: int
    S: Tuple[int, ...] = ()
    b1: int = 0
    b_p: Dict[int, int] = field(default_factory=dict)

    @property
    def assembled_modulus(self) -> int:
        """n! * p1 * p2 * prod(S): the modulus the scale q must be 1 modulo."""
        return math.factorial(self.n) * self.p1 * self.p2 * math.prod(self.S)

    def verify(self) -> Dict[str, bool]:
        n, p1, p2 = self.n, self.p1, self.p2
        R = list(self.R)
        Rp = poly.derivative(R)
        split = poly.fp_distinct_linear_split(FpPoly.reduce(Rp, p1))
        vals = _critical_values_plain(n, self.a_prime)
        red = [_reduce_mod(v, p2) for v in vals]
        small = set(range(2, n + 1))
        return {
            "p0_coprime_to_n(n-1)": (n * (n - 1)) % self.p0 != 0 and is_prime(self.p0),
            "R_is_eisenstein_form": R == eisenstein_R(n, self.p0),
            "p1_admissible": is_prime(p1) and p1 > n and p1 not in self.S,
            "R_irreducible_mod_p1": poly.fp_is_irreducible(FpPoly.reduce(R, p1)),
            "R'_splits_distinct_mod_p1": split is not None
            and len(split) == n - 1
            and tuple(split) == tuple(self.rprime_roots),
            "a'_values_distinct": _pairwise_distinct(vals),
            "p2_admissible": is_prime(p2) and p2 not in set(self.S) | small | {p1},
            "a'_values_distinct_mod_p2": None not in red and _pairwise_distinct(red),
        }

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "p0": str(self.p0),
            "R": poly.to_json(self.R),
            "p1": str(self.p1),
            "rprime_roots": [str(x) for x in self.rprime_roots],
            "a_prime": [str(x) for x in self.a_prime],
            "p2": str(self.p2),
            "S": [str(p) for p in self.S],
            "b1": str(self.b1),
            "b_p": {str(p): str(b) for p, b in sorted(self.b_p.items())},
            "assembled_modulus": str(self.assembled_modulus),
        }


def build_certificate(
    n: int, S: Sequence[int] = (), scan_limit: int = 10**5, seed: int = 0
) -> ParamCertificate:
    """Run the p0/p1, a', p2 searches and bundle the witnesses."""
    S = tuple(sorted(set(S)))
    p0, p1, roots = find_eisenstein_pair(n, S, scan_limit)
    a_prime = find_distinct_value_tuple(n, seed=seed)
    p2 = find_p2(n, a_prime, S, p1, scan_limit)
    small = sorted(set(S) | set(primes_up_to(n)))
    return ParamCertificate(
        n=n,
        p0=p0,
        p1=p1,
        R=tuple(eisenstein_R(n, p0)),
        rprime_roots=tuple(roots),
        a_prime=tuple(a_prime),
        p2=p2,
        S=S,
        b1=p0 % p1,
        b_p={p: 1 for p in small},
    )


def assemble_base_params(n: int, S: Sequence[int], cert: ParamCertificate) -> List[Congruence]:
    """One merged congruence (residue, modulus) per a_i.

    a_1: coprime to n (taken = 1 mod rad n), divisible by n-1 and by the primes
    of S not dividing n, a_1 = n * rho_1 (mod p1), a_1 = a'_1 (mod p2).
    a_i, i >= 2: divisible by n! and every p in S, a_i = rho_i (mod p1),
    a_i = a'_i (mod p2). Roots rho of R' are assigned in ascending order.
    """
    p1, p2 = cert.p1, cert.p2
    roots = cert.rprime_roots
    rad_n = radical(n)
    a1_parts: List[Congruence] = [(1 % rad_n, rad_n), (0, n - 1)]
    a1_parts += [(0, p) for p in S if n % p]
    a1_parts += [(n * roots[0] % p1, p1), (_reduce_mod(Fraction(cert.a_prime[0]), p2), p2)]
    out = [crt_solve(a1_parts)]
    div = math.lcm(math.factorial(n), *S) if S else math.factorial(n)
    for i in range(1, n - 1):
        parts = [(0, div), (roots[i] % p1, p1), (_reduce_mod(Fraction(cert.a_prime[i]), p2), p2)]
        out.append(crt_solve(parts))
    return out


def verify_conditions(n: int, S: Sequence[int], cert: ParamCertificate, a: Sequence[int]) -> Dict[str, bool]:
    """Conditions (a)-(c) on a and their consequences (i)-(v), checked directly."""
    p1, p2 = cert.p1, cert.p2
    roots = cert.rprime_roots
    fact = math.factorial(n)
    P0 = build_P(n, a, 0)
    integral = poly.is_integral(P0)
    out: Dict[str, bool] = {
        "a_1_coprime_to_n": math.gcd(a[0], n) == 1,
        "a_1_divisible": a[0] % (n - 1) == 0 and all(a[0] % p == 0 for p in S if n % p),
        "a_i_divisible": all(x % fact == 0 and all(x % p == 0 for p in S) for x in a[1:]),
        "b_roots_mod_p1": sorted([_reduce_mod(Fraction(a[0], n), p1)] + [x % p1 for x in a[1:]])
        == sorted(roots),
        "c_match_a'_mod_p2": all(
            (Fraction(x) - Fraction(y)).numerator % p2 == 0 for x, y in zip(a, cert.a_prime)
        ),
        "i_P_integral": integral,
    }
    if not integral:
        return out
    system = disc_linear_factorization(n, a)
    small = sorted(set(S) | set(primes_up_to(n)))
    out["ii_iii_delta1_coprime"] = all(system.evaluate(1) % p for p in small)
    Pb1 = build_P(n, a, cert.p0 % p1)
    out["iv_irreducible_mod_p1"] = poly.fp_is_irreducible(FpPoly.reduce(Pb1, p1))
    out["v_pairwise_coprime"] = system.pairwise_coprime()
    return out


def b_congruence(
    cert: ParamCertificate, S: Sequence[int], a: Sequence[int]
) -> Tuple[int, int, Dict[int, int]]:
    """(residue, modulus t, chosen residue per prime) for admissible b.

    b = 1 mod every p in S and every p <= n, b = p0 mod p1; each choice is
    checked against the actual a and replaced by a scan if it fails. A prime
    p <= n outside S for which no residue keeps p out of the discriminant is
    left unconstrained.
    """
    n, p1 = cert.n, cert.p1
    system = disc_linear_factorization(n, a)
    chosen: Dict[int, int] = {}
    for p in sorted(set(S) | set(primes_up_to(n))):
        pick = next((b for b in [1, *range(p)] if system.evaluate(b) % p), None)
        if pick is None:
            if p in S:
                raise ScanExhausted(f"every b makes the discriminant divisible by {p} in S")
            continue
        chosen[p] = pick % p
    b1 = cert.p0 % p1
    if not poly.fp_is_irreducible(FpPoly.reduce(build_P(n, a, b1), p1)):
        b1 = next(
            (b for b in range(p1) if poly.fp_is_irreducible(FpPoly.reduce(build_P(n, a, b), p1))),
            None,
        )
        if b1 is None:
            raise ScanExhausted(f"P_(a,b) is reducible mod {p1} for every b")
    chosen[p1] = b1
    residue, t = crt_solve([(b, p) for p, b in chosen.items()])
    return residue, t, chosen


def signature_intervals(n: int, A: Sequence) -> Dict[int, List[Interval]]:
    """Real-root count of P_{A,b} on each open cell between the roots of Delta_{A,b}."""
    system = disc_linear_factorization(n, A)
    pts = sorted(set(system.roots()))
    cells: List[Interval] = []
    edges: List[Optional[Fraction]] = [None, *pts, None]
    for lo, hi in zip(edges, edges[1:]):
        cells.append(Interval(lo, hi))
    out: Dict[int, List[Interval]] = {}
    for cell in cells:
        r = poly.real_root_count(build_P(n, A, cell_sample(cell)))
        out.setdefault(r, []).append(cell)
    return out


def cell_sample(cell: Interval) -> Fraction:
    """Midpoint, or one unit beyond the finite end of an unbounded cell."""
    if cell.lo is None and cell.hi is None:
        return Fraction(0)
    if cell.lo is None:
        return cell.hi - 1
    if cell.hi is None:
        return cell.lo + 1
    return (cell.lo + cell.hi) / 2


@dataclass(frozen=True)
class SignatureRegion:
    target_r: int
    A: Tuple[int, ...]
    I: Interval
    witness_B: Fraction

    def check_points(self) -> List[Fraction]:
        """Three rational points of I: the witness and one near each end."""
        I = self.I
        if I.bounded:
            w = I.width()
            return [I.lo + w / 8, self.witness_B, I.hi - w / 8]
        if I.lo is None and I.hi is None:
            return [Fraction(-1), Fraction(0), Fraction(1)]
        if I.lo is None:
            return [I.hi - Fraction(1, 2), I.hi - 2, I.hi - 10**6]
        return [I.lo + Fraction(1, 2), I.lo + 2, I.lo + 10**6]

    def to_json(self) -> dict:
        return {
            "target_r": self.target_r,
            "A": [str(x) for x in self.A],
            "I": self.I.to_json(),
            "witness_B": str(self.witness_B),
        }


def check_signature(n: int, r: int) -> None:
    if not 0 <= r <= n or (n - r) % 2:
        raise ValueError(f"signature r={r} impossible for degree {n}: need 0 <= r <= n, r = n mod 2")


def _snap(target: float, residue: int, modulus: int) -> int:
    k = round((target - residue) / modulus)
    return residue + k * modulus


def _pattern_critical_points(z: Sequence[float]) -> List[float]:
    """Critical points of prod(x - z_j): one root of sum 1/(x - z_j) in each gap."""
    z = sorted(z)
    out = []
    for lo, hi in zip(z, z[1:]):
        a, b = lo, hi
        for _ in range(100):
            mid = (a + b) / 2
            s = sum(1 / (mid - zj) for zj in z)
            if s > 0:
                a = mid
            else:
                b = mid
        out.append((a + b) / 2)
    return out


def _root_patterns(n: int) -> List[List[float]]:
    pats = [
        [j * (j + 1) / 2 for j in range(n)],
        [float(j) for j in range(n)],
        [2.0**j for j in range(n)],
        [float(j * j) for j in range(n)],
    ]
    out = []
    for z in pats:
        crit = _pattern_critical_points(z)
        centre = (crit[0] + crit[-1]) / 2 if crit else 0.0
        span = (crit[-1] - crit[0]) if len(crit) > 1 else 1.0
        norm = [(c - centre) / span for c in crit]
        out.append(norm)
        out.append(sorted(-c for c in norm))
    return out


def _small_candidates(congruences: Sequence[Congruence], radius: int):
    """Tuples of class representatives with |k| <= radius, nearest to zero first."""
    reps = []
    for res, mod in congruences:
        centred = res - mod if res > mod // 2 else res
        ks = sorted(range(-radius, radius + 1), key=lambda k: (abs(centred + k * mod), k))
        reps.append([centred + k * mod for k in ks])
    return itertools.product(*reps)


def _choose_cell(cells: List[Interval]) -> Interval:
    unbounded = [c for c in cells if not c.bounded]
    if unbounded:
        return min(unbounded, key=lambda c: (abs(c.lo if c.lo is not None else c.hi), c.lo is None))
    return max(cells, key=lambda c: (c.width(), -abs(c.lo)))


def find_signature_direction(
    n: int,
    r: int,
    cert: ParamCertificate,
    congruences: Sequence[Congruence],
    search_budget: int = 5000,
    min_width: Fraction = Fraction(0),
    small_radius: int = 2,
) -> SignatureRegion:
    """An integer tuple A in the assembled classes with a b-cell of exactly r real roots.

    Small class representatives are tried first (keeps discriminants small),
    then root patterns of real-rooted polynomials are scaled up by powers of
    two and snapped into the classes. The first success in this fixed order
    is returned. Bounded cells narrower than ``min_width`` do not count.
    """
    check_signature(n, r)
    tried = 0

    def candidates():
        seen = set()
        for A in _small_candidates(congruences, small_radius):
            seen.add(A)
            yield A
        mod = max(m for _, m in congruences)
        pats = _root_patterns(n)
        for e in itertools.count(-2):
            K = mod * 2.0**e
            for pat in pats:
                for j0 in range(n - 1):
                    others = [c for j, c in enumerate(pat) if j != j0]
                    a1 = _snap(n * K * pat[j0], *congruences[0])
                    rest = [_snap(K * c, *congruences[i + 1]) for i, c in enumerate(others)]
                    A = (a1, *rest)
                    if A not in seen:
                        seen.add(A)
                        yield A

    for A in candidates():
        if tried >= search_budget:
            break
        tried += 1
        pts = [Fraction(A[0], n), *A[1:]]
        if not _pairwise_distinct(pts):
            continue
        cells = [
            c for c in signature_intervals(n, A).get(r, []) if not c.bounded or c.width() >= min_width
        ]
        if not cells:
            continue
        I = _choose_cell(cells)
        return SignatureRegion(r, tuple(A), I, cell_sample(I))
    raise BudgetExhausted(f"no direction with {r} real roots within {search_budget} candidates")


def scale_params(
    region: SignatureRegion,
    cert: ParamCertificate,
    q: int,
    b_cong: Tuple[int, int],
) -> FamilyParams:
    """a = A*q with b restricted to q^n * I and the b congruence class."""
    M = cert.assembled_modulus
    if q < 1 or (q - 1) % M:
        raise ValueError(f"scale q={q} must be a positive integer = 1 mod {M}")
    n = cert.n
    residue, t = b_cong
    return FamilyParams(
        n=n,
        a=tuple(x * q for x in region.A),
        b_residue=residue,
        b_modulus=t,
        b_interval=region.I.scaled(Fraction(q) ** n),
        q=q,
    )
