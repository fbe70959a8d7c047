"""Valuations, expansions, convergence domain."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from padsum.kernel import factorial
from padsum.padic import (
    ConvergenceParams,
    PadicApprox,
    Prime,
    Valuation,
    convergence_threshold,
    expand,
    in_convergence_domain,
    padic_norm,
    term_val_profile,
    val_factorial,
    val_int,
    val_rat,
)

P2, P3, P5 = Prime(2), Prime(3), Prime(5)


def val_oracle(n: int, p: int) -> int:
    """Direct factor-out-p reference valuation."""
    assert n != 0
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def test_prime_validation():
    assert Prime(2).value == 2
    assert Prime(9973).value == 9973
    for bad in (1, 0, -3, 9, 10000):
        with pytest.raises(ValueError):
            Prime(bad)


def test_valuation_ordering_and_infinity():
    assert Valuation(3) > Valuation(1)
    assert Valuation.INFINITE > Valuation(10**9)
    assert Valuation.INFINITE == Valuation.INFINITE
    assert Valuation.INFINITE >= Valuation.INFINITE
    assert Valuation(2) > Fraction(-1, 2)
    assert not Valuation(-1) > Fraction(-1, 2)
    assert Valuation(2) + Valuation(3) == Valuation(5)
    assert Valuation(2) + Valuation.INFINITE == Valuation.INFINITE
    assert Valuation(2) * 3 == Valuation(6)
    assert Valuation.INFINITE * 5 == Valuation.INFINITE


def test_val_int_examples():
    assert val_int(12, P2) == Valuation(2)
    assert val_int(0, P5).is_infinite
    assert val_int(7, P5) == Valuation(0)
    assert val_int(-12, P2) == Valuation(2)


def test_val_factorial_examples():
    # 10! = 3628800 = 2^8 * ..., frozen via val_oracle
    assert val_factorial(10, P2) == Valuation(8)
    assert val_oracle(factorial(10), 2) == 8
    # among 1..25 there are 5 multiples of 5 and one extra factor from 25
    assert val_factorial(25, P5) == Valuation(6)
    assert val_factorial(0, P3) == Valuation(0)


@given(st.integers(min_value=0, max_value=300), st.sampled_from([2, 3, 5, 7, 11, 13]))
def test_val_factorial_matches_direct_factorization(n, p):
    assert val_factorial(n, Prime(p)) == val_int(factorial(n), Prime(p))


def test_val_rat_examples():
    assert val_rat(Fraction(1, 4), P2) == Valuation(-2)
    assert val_rat(Fraction(9, 2), P3) == Valuation(2)
    assert val_rat(0, P3).is_infinite
    assert padic_norm(Fraction(1, 4), P2) == 4
    assert padic_norm(0, P2) == 0


small_fractions = st.fractions(min_value=-50, max_value=50, max_denominator=60)


@given(small_fractions, small_fractions, st.sampled_from([2, 3, 5]))
def test_ultrametric_inequality(a, b, p):
    prime = Prime(p)
    va, vb, vs = val_rat(a, prime), val_rat(b, prime), val_rat(a + b, prime)
    assert vs >= min(va, vb, key=lambda v: v._key())
    if va != vb:
        assert vs == min(va, vb, key=lambda v: v._key())


@given(small_fractions, small_fractions, st.sampled_from([2, 3, 5]))
def test_valuation_multiplicativity(a, b, p):
    prime = Prime(p)
    product = val_rat(a * b, prime)
    if a != 0 and b != 0:
        assert product == val_rat(a, prime) + val_rat(b, prime)
    else:
        assert product.is_infinite


def test_expand_examples():
    minus_one = expand(Fraction(-1), P5, 3)
    assert minus_one.offset == 0 and minus_one.digits == (4, 4, 4)
    # modular-inverse oracle: 3 * 17 = 51 = 1 mod 25, and 17 = 2 + 3*5
    third = expand(Fraction(1, 3), P5, 2)
    assert third.digits == (2, 3)
    zero = expand(0, P3, 4)
    assert zero.is_zero and zero.reconstruct() == 0


def test_expand_rendering():
    approx = expand(Fraction(1, 3), P5, 2)
    assert approx.render() == "p=5 val=0 digits=[2,3]"
    assert approx.to_json_dict() == {"p": 5, "val": 0, "digits": [2, 3]}


def test_padic_approx_invariants():
    with pytest.raises(ValueError):
        PadicApprox(P5, 0, (0, 1))  # leading zero digit on a nonzero value
    with pytest.raises(ValueError):
        PadicApprox(P5, 0, (5,))  # digit out of range


@given(small_fractions, st.sampled_from([2, 3, 5, 7]), st.integers(min_value=1, max_value=12))
def test_expand_reconstruct_round_trip(q, p, m):
    prime = Prime(p)
    approx = expand(q, prime, m)
    difference = Fraction(q) - approx.reconstruct()
    assert difference == 0 or val_rat(difference, prime) >= approx.offset + m


def test_convergence_threshold_examples():
    assert convergence_threshold(ConvergenceParams(1, 1), P2) == Fraction(-1)
    assert convergence_threshold(ConvergenceParams(1, 0), P2) == 0
    # the threshold is exclusive
    assert not in_convergence_domain(Fraction(1, 2), P2, ConvergenceParams(1, 1))
    assert in_convergence_domain(7, P2, ConvergenceParams(1, 1))
    assert in_convergence_domain(7, P5, ConvergenceParams(2, 3))
    assert not in_convergence_domain(1, P2, ConvergenceParams(1, 0))
    assert in_convergence_domain(0, P2, ConvergenceParams(1, 0))


def test_term_val_profile_factorials():
    profile = term_val_profile(lambda n: Fraction(factorial(n)), P2, 40)
    assert profile.converges
    # Legendre oracle for the first few terms
    expected = [n - bin(n).count("1") for n in range(1, 8)]
    assert [v.exponent for v in profile.valuations[:7]] == expected


def test_term_val_profile_detects_divergence():
    profile = term_val_profile(lambda n: Fraction(1, 2) ** n, P2, 30)
    assert not profile.converges


def test_term_val_profile_zero_series():
    profile = term_val_profile(lambda n: Fraction(0), P3, 10)
    assert profile.converges
    assert all(v.is_infinite for v in profile.valuations)
