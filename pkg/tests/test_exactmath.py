import random

import pytest

from sqfdisc.exactmath import (
    Factorization,
    Indeterminate,
    crt_solve,
    factorize,
    integer_nth_root,
    is_prime,
    is_squarefree,
    merge_factorizations,
    next_prime,
    perfect_power,
    primality_provenance,
    primes_up_to,
    radical,
    squarefree_from,
)

from oracles import crt_scan, trial_factor, trial_is_prime


def test_is_prime_small_cases():
    assert is_prime(2)
    assert not is_prime(1)
    assert not is_prime(0)
    assert not is_prime(10403)  # 101 * 103


def test_is_prime_matches_trial_division():
    for m in range(2000):
        assert is_prime(m) == trial_is_prime(m), m


def test_is_prime_strong_pseudoprimes():
    # strong pseudoprimes to several small bases
    for m in (2047, 1373653, 25326001, 3215031751, 2152302898747, 3474749660383, 341550071728321):
        assert not is_prime(m)
    assert is_prime(2**61 - 1)
    assert is_prime(2**89 - 1)
    assert not is_prime((2**61 - 1) * (2**31 - 1))


def test_primality_provenance_switches_above_bound():
    assert primality_provenance(101).endswith("deterministic")
    assert "64" in primality_provenance(2**127 - 1)


def test_primes_up_to_and_next_prime():
    assert primes_up_to(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert next_prime(13) == 17
    assert next_prime(1) == 2


def test_factorize_examples():
    assert factorize(12) == Factorization(1, ((2, 2), (3, 1)))
    assert factorize(-30) == Factorization(-1, ((2, 1), (3, 1), (5, 1)))
    assert factorize(1234567891) == Factorization(1, ((1234567891, 1),))
    assert factorize(1) == Factorization(1, ())
    with pytest.raises(ValueError):
        factorize(0)


def test_factorize_matches_trial_division():
    rng = random.Random(7)
    for _ in range(300):
        m = rng.randint(-(10**9), 10**9) or 1
        sign, facs = trial_factor(m)
        assert factorize(m) == Factorization(sign, tuple(facs))


def test_factorize_beyond_trial_bound():
    p, q = 1000003, 1000033
    assert factorize(p * q, trial_bound=100) == Factorization(1, ((p, 1), (q, 1)))
    assert factorize(p**3 * q, trial_bound=100) == Factorization(1, ((p, 3), (q, 1)))


def test_factorize_budget_gives_indeterminate():
    p, q = 2**61 - 1, 2**89 - 1
    res = factorize(6 * p * q, trial_bound=100, rho_budget=10)
    assert isinstance(res, Indeterminate)
    assert res.value == 6 * p * q
    assert res.known == ((2, 1), (3, 1))
    assert squarefree_from(res) is None


def test_squarefree_from_partial_information():
    assert squarefree_from(Indeterminate(1, ((3, 2),), (10**40 + 1,))) is False
    assert squarefree_from(Indeterminate(1, (), (91 * 91,))) is False
    assert squarefree_from(Indeterminate(1, (), (91 * 5, 91 * 7))) is False


def test_is_squarefree_examples():
    assert is_squarefree(4) is False
    assert is_squarefree(-30) is True
    assert is_squarefree(45) is False
    with pytest.raises(ValueError):
        is_squarefree(0)


def test_merge_factorizations_multiplies():
    parts = [factorize(-12), factorize(35), factorize(-6)]
    merged = merge_factorizations(parts)
    assert merged.value == (-12) * 35 * (-6)
    assert merged.factors == ((2, 3), (3, 2), (5, 1), (7, 1))


def test_crt_examples():
    assert crt_solve([(1, 2), (2, 3)]) == (5, 6)
    assert crt_solve([(0, 5)]) == (0, 5)
    # oracle scan of 0..125
    assert crt_scan([(3, 7), (4, 9), (0, 2)]) == 94
    assert crt_solve([(3, 7), (4, 9), (0, 2)]) == (94, 126)


def test_crt_matches_scan():
    rng = random.Random(3)
    for _ in range(200):
        moduli = rng.sample([2, 3, 5, 7, 11, 13], rng.randint(1, 4))
        cong = [(rng.randrange(m), m) for m in moduli]
        x, L = crt_solve(cong)
        assert x == crt_scan(cong)
        assert L == eval("*".join(map(str, moduli)))


def test_crt_overlapping_moduli():
    assert crt_solve([(1, 4), (3, 6)]) == (9, 12)
    with pytest.raises(ValueError):
        crt_solve([(1, 4), (2, 6)])
    with pytest.raises(ValueError):
        crt_solve([(1, 0)])


def test_roots_and_powers():
    assert integer_nth_root(10**30 + 5, 3) == 10**10
    assert perfect_power(3**7) == (3, 7)
    assert perfect_power(12) is None
    assert radical(72) == 6
    assert radical(1) == 1
