import math
import random
from fractions import Fraction

import pytest

from sqfdisc.exactmath import primes_up_to
from sqfdisc.family import LinearFactorSystem, disc_linear_factorization
from sqfdisc.pipeline import GenerationTarget, prepare
from sqfdisc.sieve import (
    CLOSED_FORM,
    ENUMERATION,
    ROOT_COUNT,
    brakenhoff_density,
    brakenhoff_empirical,
    exceptional_primes,
    local_density_bivariate,
    local_density_univariate,
    sieve_profile,
    truncated_product,
)

from oracles import enumerate_density


def _oracle_bivariate(factors, n, p):
    """Pairs mod p^2, not both divisible by p, with A(x, y^n) != 0 mod p^2."""
    m = p * p
    good = total = 0
    for x in range(m):
        for y in range(m):
            if x % p == 0 and y % p == 0:
                continue
            total += 1
            val = 1
            for c, d in factors:
                val *= c * x + d * y**n
            good += val % m != 0
    return Fraction(good, total)


def test_univariate_examples():
    assert local_density_univariate([(1, 0)], 2).value == Fraction(3, 4)
    assert local_density_univariate([(1, 0), (1, 1)], 2).value == Fraction(1, 2)
    assert enumerate_density([(1, 0), (1, 1)], 5) == Fraction(23, 25)
    closed = local_density_univariate([(1, 0), (1, 1)], 5, threshold=3)
    assert closed.method == CLOSED_FORM and closed.value == Fraction(23, 25)


def test_univariate_accepts_system_objects():
    s = LinearFactorSystem(-1, ((4, -4),))
    assert local_density_univariate(s, 2).value == enumerate_density([(4, -4)], 2)


def test_repeated_factor_rejected():
    with pytest.raises(ValueError):
        local_density_univariate([(1, 1), (2, 2)], 3)
    with pytest.raises(ValueError):
        local_density_univariate([(0, 3)], 3)


def test_closed_form_agrees_with_enumeration_off_exceptional_primes():
    rng = random.Random(4)
    for _ in range(40):
        factors = [(rng.randint(1, 30), rng.randint(-500, 500)) for _ in range(rng.randint(1, 4))]
        try:
            bad = exceptional_primes(factors)
        except ValueError:
            continue
        if any(c1 * d2 == c2 * d1 for i, (c1, d1) in enumerate(factors) for c2, d2 in factors[i + 1:]):
            continue
        for p in primes_up_to(97):
            if p < 7 or p in bad:
                continue
            closed = local_density_univariate(factors, p, threshold=0)
            assert closed.method == CLOSED_FORM
            assert closed.value == enumerate_density(factors, p)


def test_exceptional_primes_use_exact_count():
    # roots 0 and -101 coincide mod 101 but not mod 101^2
    factors = [(1, 0), (1, 101)]
    d = local_density_univariate(factors, 101, threshold=0)
    assert d.method == ROOT_COUNT
    assert d.value == enumerate_density(factors, 101)
    assert d.value == 1 - Fraction(101, 101**2)


def test_exact_count_matches_enumeration_everywhere():
    rng = random.Random(5)
    for _ in range(200):
        factors = [(rng.choice([1, 3, 9, 25, 7, 18]), rng.randint(-300, 300)) for _ in range(rng.randint(1, 4))]
        if any(c1 * d2 == c2 * d1 for i, (c1, d1) in enumerate(factors) for c2, d2 in factors[i + 1:]):
            continue
        for p in (2, 3, 5, 7, 11):
            forced = local_density_univariate(factors, p, threshold=0)
            assert forced.value == enumerate_density(factors, p), (factors, p)


def test_bivariate_examples():
    # A = x at p = 2: 12 locally coprime pairs, x = 0 mod 4 kills (0, 1) and (0, 3)
    d = local_density_bivariate([(1, 0)], 3, 1, 2)
    assert d.value == Fraction(10, 12) == _oracle_bivariate([(1, 0)], 3, 2)
    d = local_density_bivariate([(1, 0), (1, 1)], 1, 1, 3)
    assert d.value == _oracle_bivariate([(1, 0), (1, 1)], 1, 3)


def test_bivariate_p_dividing_t_is_univariate():
    factors = [(4, -4), (1, 7)]
    assert local_density_bivariate(factors, 2, 6, 3) == local_density_univariate(factors, 3)


def test_bivariate_methods_agree():
    rng = random.Random(6)
    for _ in range(30):
        factors = [(rng.choice([1, 2, 5, 27]), rng.randint(-60, 60)) for _ in range(rng.randint(1, 3))]
        if any(c1 * d2 == c2 * d1 for i, (c1, d1) in enumerate(factors) for c2, d2 in factors[i + 1:]):
            continue
        n = rng.randint(1, 4)
        for p in (2, 3, 5):
            got = local_density_bivariate(factors, n, 1, p)
            assert got.method == ENUMERATION
            assert got.value == _oracle_bivariate(factors, n, p)
        p = 37
        got = local_density_bivariate(factors, n, 1, p, threshold=0)
        assert got.value == local_density_bivariate(factors, n, 1, p).value


def test_bivariate_closed_form():
    got = local_density_bivariate([(1, 0), (1, 1)], 2, 1, 101, threshold=0)
    assert got.method == CLOSED_FORM and got.value == 1 - Fraction(2, 101 * 102)


def test_truncated_product_single_factor():
    lower, upper = truncated_product([(1, 0)], 100)
    expected = math.prod((1 - Fraction(1, p * p) for p in primes_up_to(100)), start=Fraction(1))
    assert upper == expected
    assert lower == upper * (1 - Fraction(1, 100))
    assert lower < 6 / math.pi**2 < upper


def test_truncated_product_zero_density():
    # four consecutive integers: the product is always divisible by 4
    factors = [(1, 0), (1, 1), (1, 2), (1, 3)]
    assert truncated_product(factors, 50) == (0, 0)


def test_truncated_product_gap_bound():
    factors = [(1, 0), (3, 1), (5, 7)]
    lower, upper = truncated_product(factors, 200)
    assert 0 <= upper - lower <= upper * Fraction(3, 200)


def test_truncated_product_includes_large_exceptional_primes():
    big = 1000003
    factors = [(1, 0), (1, big)]
    prof = sieve_profile(factors, 100)
    assert big in prof.densities
    assert prof.densities[big].value == 1 - Fraction(1, big)


def test_profile_serializes():
    prof = sieve_profile([(1, 0), (1, 1)], 30)
    js = prof.to_json()
    assert js["densities"][0] == {"p": 2, "a_p_exact": "1/2", "a_p_decimal": "0.500000000000", "method": "enumeration"}


@pytest.mark.parametrize("n,r", [(2, 0), (3, 1), (3, 3), (4, 2)])
def test_assembled_families_have_positive_local_densities(n, r):
    con = prepare(GenerationTarget(n, r, (2, 5)))
    params = con.params(1)
    system = disc_linear_factorization(n, params.a).substitute(params.b_modulus, params.b_residue)
    prof = sieve_profile(system, 200)
    assert all(d.value > 0 for d in prof.densities.values())
    # b is forced to avoid every prime of S and every p <= n
    for p in set(primes_up_to(n)) | {2, 5}:
        assert prof.densities[p].value == 1


def test_brakenhoff_table():
    assert brakenhoff_density(7, 2) == Fraction(1, 2)
    assert brakenhoff_density(2, 3) == Fraction(8, 9)
    assert brakenhoff_density(3, 3) == Fraction(22, 27)
    assert brakenhoff_density(4, 3) == Fraction(62, 81)


@pytest.mark.parametrize("n,p", [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2), (4, 3), (2, 5), (3, 5)])
def test_brakenhoff_exhaustive_matches_formula(n, p):
    assert brakenhoff_empirical(n, p) == brakenhoff_density(n, p)


def test_brakenhoff_sampling():
    est = brakenhoff_empirical(4, 5, exhaustive=False, samples=4000, seed=1)
    assert abs(est.mean - float(brakenhoff_density(4, 5))) < 4 * est.stderr
    again = brakenhoff_empirical(4, 5, exhaustive=False, samples=4000, seed=1)
    assert again == est


def test_brakenhoff_work_limit():
    with pytest.raises(OverflowError):
        brakenhoff_empirical(5, 7, work_limit=10**5)
