import itertools
import math
from fractions import Fraction

import pytest

from sqfdisc import poly
from sqfdisc.exactmath import Factorization
from sqfdisc.family import Interval, build_P, disc_linear_factorization
from sqfdisc.pipeline import (
    GenerationTarget,
    InvalidTarget,
    RunReport,
    SearchExhausted,
    count_distinct_discriminants,
    density_report,
    fit_exponent,
    generate_stream,
    prepare,
    scan_order,
    small_discriminant_candidates,
)

from oracles import (
    brute_factor_degrees,
    descartes_real_roots,
    sylvester_discriminant,
    trial_factor,
    trial_is_prime,
)


def _recheck(rec, n, r, S):
    """Re-derive every certified claim from the coefficients alone."""
    f = list(rec.poly)
    assert len(f) == n + 1 and f[-1] == 1
    assert f == poly.to_int_poly(build_P(n, rec.params.a, rec.b))
    disc = sylvester_discriminant(f)
    assert disc == rec.disc
    sign, facs = trial_factor(int(disc))
    assert all(e == 1 for _, e in facs)
    assert isinstance(rec.disc_factorization, Factorization)
    assert rec.disc_factorization.factors == tuple(facs)
    assert all(math.gcd(int(disc), p) == 1 for p in S)
    w = rec.irreducibility_witness
    assert w is not None and trial_is_prime(w) and disc % w
    assert brute_factor_degrees(f, w) == (n,)
    assert descartes_real_roots(f) == r


def test_quadratic_imaginary_family():
    target = GenerationTarget(2, 0, (), record_budget=10)
    recs = list(generate_stream(target))
    assert len(recs) == 10
    for rec in recs:
        _recheck(rec, 2, 0, ())
        assert rec.disc < 0


def test_totally_real_cubic_family_with_excluded_primes():
    target = GenerationTarget(3, 3, (2, 5), record_budget=20)
    report = RunReport()
    recs = list(generate_stream(target, report))
    assert len(recs) == 20
    for rec in recs:
        _recheck(rec, 3, 3, (2, 5))
        assert rec.sn_evidence.certified
    assert report.squarefree_count == 20
    assert report.records_scanned >= 20
    assert report.distinct_discriminants == len({rec.disc for rec in recs})


def test_records_follow_scan_order():
    target = GenerationTarget(3, 1, (2, 5), record_budget=15)
    recs = list(generate_stream(target))
    keys = [(rec.params.q, abs(rec.b), rec.b) for rec in recs]
    assert keys == sorted(keys)


@pytest.mark.parametrize("n,r", [(3, 2), (3, 5), (4, 1), (1, 1)])
def test_invalid_signature(n, r):
    with pytest.raises(InvalidTarget):
        prepare(GenerationTarget(n, r))


def test_non_prime_avoid_list():
    with pytest.raises(InvalidTarget):
        prepare(GenerationTarget(3, 1, (4,)))


def test_generation_is_deterministic():
    target = GenerationTarget(4, 2, (2, 5), record_budget=8, seed=3)
    first = [rec.to_json() for rec in generate_stream(target)]
    second = [rec.to_json() for rec in generate_stream(target)]
    assert first == second


def test_parallel_matches_serial():
    serial = [rec.to_json() for rec in generate_stream(GenerationTarget(3, 1, (2, 5), record_budget=12))]
    parallel = [rec.to_json() for rec in generate_stream(GenerationTarget(3, 1, (2, 5), record_budget=12, workers=2))]
    assert serial == parallel


def test_scan_budget_exhaustion():
    with pytest.raises(SearchExhausted) as err:
        list(generate_stream(GenerationTarget(3, 1, (2, 5), record_budget=50, scan_budget=5)))
    assert err.value.stage == "scan"


def test_zero_budget_emits_nothing():
    assert list(generate_stream(GenerationTarget(2, 0, record_budget=0))) == []


def test_construction_is_consistent():
    con = prepare(GenerationTarget(3, 3, (2, 5)))
    assert con.b_modulus == 2 * 3 * 5 * con.cert.p1
    for q in itertools.islice(con.q_schedule(), 3):
        assert q % con.M == 1
        params = con.params(q)
        assert params.q == q
        assert all(x % q == 0 for x in params.a)
    js = con.to_json()
    assert js["q_modulus"] == str(con.M)


def test_scan_order():
    assert list(itertools.islice(scan_order(Interval(None, None), 1, 3), 5)) == [1, -2, 4, -5, 7]
    assert list(scan_order(Interval(Fraction(-7), Fraction(7)), 0, 5)) == [0, -5, 5]
    assert list(itertools.islice(scan_order(Interval(Fraction(10), None), 1, 4), 3)) == [13, 17, 21]
    assert list(itertools.islice(scan_order(Interval(None, Fraction(-10)), 1, 4), 3)) == [-11, -15, -19]
    assert list(scan_order(Interval(Fraction(0), Fraction(1)), 0, 7)) == []


def test_small_discriminant_candidates_match_brute_force():
    con = prepare(GenerationTarget(2, 0))
    params = con.params(1)
    system = disc_linear_factorization(2, params.a)
    bound = 5000
    got = small_discriminant_candidates(params, system, bound)
    lo = params.b_interval.lo
    brute = [
        b
        for b in range(math.floor(lo) - 1, math.floor(lo) + bound + 10)
        if params.admits(b) and abs(system.evaluate(b)) <= bound
    ]
    assert got == brute


def test_fit_exponent():
    assert fit_exponent([(10, 1), (100, 10), (1000, 100)]) is None
    pts = [(10**k, 3 * 10 ** (k / 2)) for k in range(3, 7)]
    assert fit_exponent(pts) == pytest.approx(0.5)
    assert fit_exponent([(10**k, 0) for k in range(3, 9)]) is None


def test_count_distinct_discriminants_quadratic():
    target = GenerationTarget(2, 0)
    rep = count_distinct_discriminants(target, [10**2, 10**3, 10**4, 10**5])
    counts = list(rep.checkpoint_counts.values())
    assert counts == sorted(counts) and counts[0] > 0
    assert rep.max_multiplicity <= 1
    assert 0.7 <= rep.exponent_fit <= 1.3
    # each counted value is a certified squarefree imaginary quadratic discriminant
    assert rep.distinct_discriminants == counts[-1]


def test_count_rejects_unsorted_checkpoints():
    with pytest.raises(ValueError):
        count_distinct_discriminants(GenerationTarget(2, 0), [100, 10])


def test_density_report_brackets_empirical_fraction():
    con = prepare(GenerationTarget(3, 1))
    rep = density_report(con.params(1), 3000, cutoff=500)
    lo, hi = rep.predicted_density
    p = float(rep.empirical_density)
    n = rep.records_scanned - rep.indeterminate_count
    sigma = math.sqrt(p * (1 - p) / n)
    assert float(lo) - 3 * sigma <= p <= float(hi) + 3 * sigma
    js = rep.to_json()
    assert js["records_scanned"] == rep.records_scanned
