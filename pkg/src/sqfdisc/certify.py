"""Independent certification of an output polynomial.

Nothing here trusts the construction: the discriminant is recomputed by the
subresultant algorithm, irreducibility needs a finite-field witness, and the
real-root count comes from a Sturm sequence.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Dict, Optional, Sequence, Tuple

from . import poly
from .exactmath import (
    DEFAULT_RHO_BUDGET,
    DEFAULT_TRIAL_BOUND,
    FactorResult,
    Factorization,
    factorize,
    is_prime,
    iter_primes,
    merge_factorizations,
    primality_provenance,
    squarefree_from,
)
from .family import FamilyParams, LinearFactorSystem, build_P, disc_linear_factorization
from .poly import FpPoly


class CertificationError(AssertionError):
    """An identity that must hold exactly failed: this is a bug, not bad luck."""


@dataclass(frozen=True)
class SnReport:
    sampled_primes: int
    observed_cycle_types: Dict[Tuple[int, ...], int]
    criterion: Optional[str] = None
    certificate: Dict[str, int] = field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return self.criterion is not None

    def to_json(self) -> dict:
        return {
            "sampled_primes": self.sampled_primes,
            "observed_cycle_types": {
                ",".join(map(str, k)): v for k, v in sorted(self.observed_cycle_types.items())
            },
            "criterion": self.criterion,
            "certificate": {k: str(v) for k, v in self.certificate.items()},
        }


def _squarefree_json(flag: Optional[bool]):
    return "indeterminate" if flag is None else flag


@dataclass(frozen=True)
class DiscRecord:
    params: Optional[FamilyParams]
    b: Optional[int]
    poly: Tuple[int, ...]
    disc: int
    disc_factorization: FactorResult
    squarefree: Optional[bool]
    coprime_to_S: bool
    real_roots: int
    irreducibility_witness: Optional[int]
    sn_evidence: Optional[SnReport]
    provenance: Dict[str, str] = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "n": len(self.poly) - 1,
            "a": None if self.params is None else [str(x) for x in self.params.a],
            "q": None if self.params is None else str(self.params.q),
            "b": None if self.b is None else str(self.b),
            "poly": poly.to_json(self.poly),
            "disc": str(self.disc),
            "disc_factorization": self.disc_factorization.to_json(),
            "squarefree": _squarefree_json(self.squarefree),
            "coprime_to_S": self.coprime_to_S,
            "real_roots": self.real_roots,
            "irreducibility_witness": None
            if self.irreducibility_witness is None
            else str(self.irreducibility_witness),
            "sn_evidence": None if self.sn_evidence is None else self.sn_evidence.to_json(),
            "provenance": dict(sorted(self.provenance.items())),
        }
        return out


def irreducible_over_Q(f: Sequence[int], witness_budget: int = 1000, disc: Optional[int] = None) -> Optional[int]:
    """First prime p <= budget, p not dividing disc, with f irreducible mod p; None if none found.

    A witness proves irreducibility over Q (f monic). ``None`` proves nothing.

    >>> irreducible_over_Q([1, 0, 1])
    3
    """
    f = poly.normalize(f)
    if f[-1] != 1:
        raise ValueError("monic polynomial expected")
    if disc is None:
        disc = poly.discriminant(f) if len(f) > 2 else 1
    if len(f) == 2:
        return 2
    for p in iter_primes():
        if p > witness_budget:
            return None
        if disc % p == 0:
            continue
        if poly.fp_is_irreducible(FpPoly.reduce(f, p)):
            return p
    return None


def _is_transposition(ct: Tuple[int, ...]) -> bool:
    return ct.count(2) == 1 and all(c in (1, 2) for c in ct)


def _jordan_prime_part(ct: Tuple[int, ...], n: int) -> Optional[int]:
    for c in ct:
        if n / 2 < c < n - 2 and is_prime(c) and ct.count(c) == 1:
            return c
    return None


def _sn_certificate(first_seen: Dict[Tuple[int, ...], int], n: int):
    """(criterion, witnesses) if the observed cycle types force S_n, else None."""
    if (n,) not in first_seen:
        return None
    if n <= 2:
        return "transitive-degree-2", {"n_cycle": first_seen[(n,)]}
    by_prime = sorted(first_seen.items(), key=lambda kv: kv[1])
    transp = next((p for ct, p in by_prime if _is_transposition(ct)), None)
    if transp is None:
        return None
    cert = {"n_cycle": first_seen[(n,)], "transposition": transp}
    nm1 = (1, n - 1)
    if nm1 in first_seen:
        cert["n_minus_1_cycle"] = first_seen[nm1]
        return "transposition+(n-1)-cycle", cert
    for ct, p in by_prime:
        ell = _jordan_prime_part(ct, n)
        if ell is not None:
            cert["prime_cycle"] = p
            return f"transposition+{ell}-cycle(Jordan)", cert
    return None


def sn_evidence(
    f: Sequence[int], prime_budget: int = 200, disc: Optional[int] = None, stop_early: bool = True
) -> SnReport:
    """Frobenius cycle types of f at primes not dividing disc, plus an S_n certificate if one appears.

    Transitivity comes from irreducibility (the caller must have a witness).
    Two sufficient criteria are recognised:
      * transposition + (n-1)-cycle: the (n-1)-cycle with transitivity makes
        the group 2-transitive, hence primitive, and a primitive group with a
        transposition is S_n;
      * transposition + a cycle type with a single prime part l, n/2 < l < n-2
        (Jordan): some power is an l-cycle.
    With ``stop_early`` sampling ends at the first prime completing a certificate.

    >>> sn_evidence([-1, -1, 0, 1]).criterion
    'transposition+(n-1)-cycle'
    """
    f = poly.normalize(f)
    n = len(f) - 1
    if disc is None:
        disc = poly.discriminant(f)
    if disc == 0:
        raise ValueError("sn_evidence needs a nonzero discriminant")
    types: Counter = Counter()
    first_seen: Dict[Tuple[int, ...], int] = {}
    sampled = 0
    found = None
    for p in iter_primes():
        if p > prime_budget:
            break
        if disc % p == 0:
            continue
        ct = poly.fp_factor_degrees(FpPoly.reduce(f, p))
        types[ct] += 1
        sampled += 1
        if ct not in first_seen:
            first_seen[ct] = p
            found = _sn_certificate(first_seen, n)
            if found and stop_early:
                break
    if found is None:
        return SnReport(sampled, dict(types))
    return SnReport(sampled, dict(types), found[0], found[1])


def certify_polynomial(
    f: Sequence[int],
    S: Sequence[int] = (),
    system: Optional[LinearFactorSystem] = None,
    b: Optional[int] = None,
    params: Optional[FamilyParams] = None,
    trial_bound: int = DEFAULT_TRIAL_BOUND,
    rho_budget: int = DEFAULT_RHO_BUDGET,
    witness_budget: int = 1000,
    sn_budget: int = 200,
) -> DiscRecord:
    """Certify a monic integer polynomial; with a factor system, factor it piecewise."""
    f = poly.to_int_poly(f)
    n = len(f) - 1
    disc = poly.discriminant(f)
    if system is not None:
        if system.evaluate(b) != disc:
            raise CertificationError(f"product formula disagrees with subresultant discriminant at b={b}")
    if disc == 0:
        fac: FactorResult = Factorization(1, ())
        squarefree: Optional[bool] = False
    else:
        if system is not None:
            parts = [factorize(v, trial_bound, rho_budget) for v in system.values(b)]
            fac = merge_factorizations(parts)
            if system.sign < 0:
                fac = _negate(fac)
        else:
            fac = factorize(disc, trial_bound, rho_budget)
        if fac.value != disc:
            raise CertificationError("factorization does not multiply back to the discriminant")
        squarefree = squarefree_from(fac)
    coprime = disc != 0 and math.gcd(disc, math.prod(S)) == 1
    real_roots = poly.real_root_count(f)
    if disc != 0 and (n - real_roots) % 2:
        raise CertificationError(f"real root count {real_roots} has the wrong parity for degree {n}")
    witness = irreducible_over_Q(f, witness_budget, disc) if disc != 0 else None
    sn = sn_evidence(f, sn_budget, disc) if witness is not None else None
    provenance = {"discriminant": "subresultant-prs", "real_roots": "sturm"}
    if isinstance(fac, Factorization) and fac.factors:
        provenance["primality"] = primality_provenance(max(p for p, _ in fac.factors))
    return DiscRecord(params, b, tuple(f), disc, fac, squarefree, coprime, real_roots, witness, sn, provenance)


def _negate(fac: FactorResult) -> FactorResult:
    return replace(fac, sign=-fac.sign)


def certify_record(
    params: FamilyParams,
    b: int,
    S: Sequence[int] = (),
    system: Optional[LinearFactorSystem] = None,
    **budgets,
) -> DiscRecord:
    """Certify P_{a,b} for a family member; b must be admissible for the params."""
    if (b - params.b_residue) % params.b_modulus:
        raise ValueError(f"b={b} violates b = {params.b_residue} mod {params.b_modulus}")
    if params.b_interval is not None and b not in params.b_interval:
        raise ValueError(f"b={b} lies outside the signature interval")
    if system is None:
        system = disc_linear_factorization(params.n, params.a)
    f = poly.to_int_poly(build_P(params.n, params.a, b))
    return certify_polynomial(f, S, system, b, params, **budgets)
