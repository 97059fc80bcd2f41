import json
import random
from fractions import Fraction

import pytest

from sqfdisc import poly
from sqfdisc.certify import (
    CertificationError,
    certify_polynomial,
    certify_record,
    irreducible_over_Q,
    sn_evidence,
)
from sqfdisc.exactmath import Factorization, Indeterminate
from sqfdisc.family import FamilyParams, Interval, LinearFactorSystem, build_P, disc_linear_factorization

from oracles import brute_factor_degrees, descartes_real_roots, sylvester_discriminant


def _quadratic(b):
    return certify_record(FamilyParams(2, (2,)), b, S=(2, 5))


def test_quadratic_records():
    # P = x^2 - 2x + b, disc = 4 - 4b
    r = _quadratic(5)
    assert r.disc == -16 and r.squarefree is False and not r.coprime_to_S
    r = _quadratic(2)
    assert r.disc == -4 and r.squarefree is False
    assert r.irreducibility_witness is not None and r.real_roots == 0
    r = _quadratic(0)
    assert r.disc == 4 and r.real_roots == 2 and r.irreducibility_witness is None


def test_zero_discriminant():
    r = _quadratic(1)  # (x - 1)^2
    assert r.disc == 0 and r.squarefree is False and not r.coprime_to_S
    assert r.irreducibility_witness is None and r.sn_evidence is None


def test_squarefree_discriminant_record():
    f = [-1, -1, 0, 1]  # disc -23
    r = certify_polynomial(f, S=(2, 5))
    assert r.disc == -23 and r.squarefree is True and r.coprime_to_S
    assert r.disc_factorization == Factorization(-1, ((23, 1),))
    assert r.real_roots == 1
    assert r.irreducibility_witness is not None
    assert r.sn_evidence.certified


def test_witness_examples():
    assert irreducible_over_Q([1, 0, 1]) == 3
    assert irreducible_over_Q([-1, 0, 1]) is None
    assert irreducible_over_Q([3, 1]) == 2
    with pytest.raises(ValueError):
        irreducible_over_Q([1, 0, 2])


def test_witness_is_genuine():
    rng = random.Random(21)
    for _ in range(60):
        n = rng.randint(2, 6)
        f = [rng.randint(-20, 20) for _ in range(n)] + [1]
        disc = sylvester_discriminant(f)
        if disc == 0:
            continue
        p = irreducible_over_Q(f, disc=disc)
        if p is not None:
            assert disc % p and brute_factor_degrees(f, p) == (n,)


def test_sn_evidence_cubic():
    rep = sn_evidence([-1, -1, 0, 1])
    assert rep.criterion == "transposition+(n-1)-cycle"
    assert set(rep.certificate) >= {"transposition"}


def test_sn_evidence_dihedral_quartic_has_no_certificate():
    # x^4 + 2 has group D4: 4-cycles and transpositions both occur, yet it is not S4
    rep = sn_evidence([2, 0, 0, 0, 1], prime_budget=500, stop_early=False)
    assert not rep.certified
    assert (4,) in rep.observed_cycle_types
    assert (1, 1, 2) in rep.observed_cycle_types
    assert (1, 3) not in rep.observed_cycle_types


def test_sn_evidence_full_sampling_counts():
    rep = sn_evidence([-1, -1, 0, 1], prime_budget=200, stop_early=False)
    assert rep.certified
    assert rep.sampled_primes == sum(rep.observed_cycle_types.values())


def test_sn_evidence_quintic_jordan_range_is_empty():
    # for n = 5 no prime lies strictly between 5/2 and 3, so only the first criterion can fire
    rep = sn_evidence([-1, -1, 0, 0, 0, 1])
    assert rep.criterion == "transposition+(n-1)-cycle"


def test_sn_evidence_rejects_zero_disc():
    with pytest.raises(ValueError):
        sn_evidence([1, 2, 1])


def test_factor_system_mismatch_raises():
    f = build_P(2, (2,), 3)
    bad = LinearFactorSystem(-1, ((4, -5),))
    with pytest.raises(CertificationError):
        certify_polynomial(f, system=bad, b=3)


def test_record_checks_admissibility():
    params = FamilyParams(2, (2,), 1, 4, Interval(None, 0))
    with pytest.raises(ValueError):
        certify_record(params, 2)
    with pytest.raises(ValueError):
        certify_record(params, 5)
    assert certify_record(params, -3).disc == 16


def test_piecewise_factorization_agrees_with_direct():
    rng = random.Random(22)
    for _ in range(40):
        n = rng.randint(2, 5)
        a = tuple(rng.randint(-9, 9) for _ in range(n - 1))
        system = disc_linear_factorization(n, a)
        if any(Fraction(x).denominator != 1 for pair in system.factors for x in pair):
            continue
        b = rng.randint(-1000, 1000)
        f = build_P(n, a, b)
        piecewise = certify_polynomial(f, system=system, b=b)
        direct = certify_polynomial(f)
        assert piecewise.disc == direct.disc == sylvester_discriminant(f)
        if piecewise.disc:
            assert piecewise.disc_factorization == direct.disc_factorization
        assert piecewise.real_roots == descartes_real_roots(poly.squarefree_part(f))


def test_indeterminate_factorization_is_reported():
    # disc of x^2 - m is 4m; two large primes defeat a tiny rho budget
    m = (2**61 - 1) * (2**89 - 1)
    r = certify_polynomial([-m, 0, 1], trial_bound=100, rho_budget=5)
    assert isinstance(r.disc_factorization, Indeterminate)
    assert r.squarefree is False  # the visible 2^2 already decides it
    r = certify_polynomial([-3 * m, 0, 1], trial_bound=100, rho_budget=5)
    assert r.squarefree is False
    r = certify_polynomial([-m, 1, 1], trial_bound=100, rho_budget=5)  # disc 1 + 4m
    if isinstance(r.disc_factorization, Indeterminate):
        assert r.to_json()["squarefree"] == "indeterminate"


def test_record_json_is_stable():
    r = _quadratic(3)
    js = r.to_json()
    assert js["disc"] == "-8" and js["b"] == "3" and js["a"] == ["2"] and js["q"] == "1"
    assert js["provenance"]["discriminant"] == "subresultant-prs"
    assert json.loads(json.dumps(js, sort_keys=True)) == js
