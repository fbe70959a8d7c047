"""Partial sums, telescoping, and p-adic verification."""

import random
from fractions import Fraction

import pytest

from padsum.kernel import factorial
from padsum.padic import Prime, term_val_profile, val_rat
from padsum.poly import RatPoly
from padsum.series import (
    ConvergenceDomainError,
    SeriesSpec,
    TelescopeSpec,
    VerificationError,
    construct_telescope_poly,
    finite_identity_check,
    finite_identity_sweep,
    general_sum_check,
    padic_sum_verify,
    power_sum,
    power_sum_via_recurrence,
    random_telescope_spec,
    series_error_profile,
    telescope_check,
    telescope_sweep,
)
from padsum.tables import TableSet


@pytest.fixture(scope="module")
def tables_plus():
    return TableSet.build(8, 1)


@pytest.fixture(scope="module")
def tables_minus():
    return TableSet.build(8, -1)


def brute_power_sum(k, eps, x, n):
    """Term-by-term enumeration oracle."""
    x = Fraction(x)
    total = Fraction(0)
    for i in range(n):
        total += Fraction(eps) ** i * factorial(i) * i**k * x**i
    return total


def test_power_sum_examples():
    assert power_sum(1, 1, 1, 4) == 23  # 0 + 1 + 4 + 18 = 4! - 1
    assert power_sum(0, 1, Fraction(2, 3), 1) == 1  # lone i = 0 term, 0^0 = 1
    assert power_sum(0, -1, 5, 1) == 1
    # frozen via brute_power_sum: 0 + 1*1 + 2*4
    assert power_sum(2, 1, 1, 3) == 9
    assert power_sum(2, 1, 1, 3) == brute_power_sum(2, 1, 1, 3)


def test_power_sum_recurrence_examples():
    assert power_sum_via_recurrence(0, 1, 1, 4) == 23  # recovers S_1 = 4! - 1
    assert power_sum_via_recurrence(1, 1, 1, 3) == 9
    assert power_sum_via_recurrence(3, -1, Fraction(1, 2), 0) == 0


def test_power_sum_two_routes_agree():
    # the recurrence route to S_{k+1} for k <= 9 covers sums up to S_10
    for k in range(10):
        for eps in (1, -1):
            for x in (1, -1, 2, Fraction(1, 2), Fraction(-2, 3)):
                for n in (0, 1, 2, 5, 9, 14):
                    assert power_sum_via_recurrence(k, eps, x, n) == power_sum(
                        k + 1, eps, x, n
                    )


def test_power_sum_recurrence_needs_nonzero_x():
    with pytest.raises(ValueError):
        power_sum_via_recurrence(1, 1, 0, 3)


def test_finite_identity_factorial_times_n(tables_plus):
    # sum_{i<n} i! * i = -1 + n! with a trivial boundary polynomial
    for n in range(1, 8):
        result = finite_identity_check(1, 1, 1, n, tables_plus)
        assert result.value == factorial(n) - 1
        assert result.rhs_constant == -1
        assert result.boundary == factorial(n)


def test_finite_identity_hand_case(tables_minus):
    # k=1, eps=-1, x=1, n=2: 2 - 3 = 1 + (-2), by enumeration
    result = finite_identity_check(1, -1, 1, 2, tables_minus)
    assert result.value == -1
    assert result.rhs_constant == 1
    assert result.boundary == -2


def test_finite_identity_sweep_matches_single(tables_plus):
    swept = finite_identity_sweep(2, 1, Fraction(1, 2), 10, tables_plus)
    assert len(swept) == 10
    single = finite_identity_check(2, 1, Fraction(1, 2), 7, tables_plus)
    assert swept[6] == single


def test_general_sum_single_power_reduction(tables_plus):
    spec = SeriesSpec(eps=1, x=Fraction(1), coeffs=(Fraction(1),))
    combined = general_sum_check(spec, 6, tables_plus)
    single = finite_identity_check(1, 1, 1, 6, tables_plus)
    assert combined.value == single.value
    assert combined.rhs_constant == single.rhs_constant
    assert combined.boundary == single.boundary


def test_general_sum_square_plus_one(tables_plus):
    # sum i!(i^2 + 1): 1 + 2 + 10 + 60 = 73 = 1 + 4! * 3
    spec = SeriesSpec(eps=1, x=Fraction(1), coeffs=(Fraction(0), Fraction(1)))
    result = general_sum_check(spec, 4, tables_plus)
    assert result.value == 73
    assert result.rhs_constant == 1
    assert result.boundary == 72


def test_general_sum_rational_mix_is_average(tables_plus):
    spec = SeriesSpec(eps=1, x=Fraction(2), coeffs=(Fraction(1, 2), Fraction(1, 2)))
    mixed = general_sum_check(spec, 7, tables_plus)
    first = finite_identity_check(1, 1, 2, 7, tables_plus)
    second = finite_identity_check(2, 1, 2, 7, tables_plus)
    assert mixed.value == (first.value + second.value) / 2
    assert mixed.boundary == (first.boundary + second.boundary) / 2


def test_series_spec_validation():
    with pytest.raises(ValueError):
        SeriesSpec(eps=1, x=Fraction(1))  # neither form
    with pytest.raises(ValueError):
        SeriesSpec(eps=1, x=Fraction(1), k=2, coeffs=(Fraction(1),))  # both
    with pytest.raises(ValueError):
        SeriesSpec(eps=1, x=Fraction(1), coeffs=(Fraction(1), Fraction(0)))
    with pytest.raises(ValueError):
        SeriesSpec(eps=2, x=Fraction(1), k=1)


def test_telescope_named_instances():
    # sum n! * n collapses onto -1 + N!
    plain = TelescopeSpec(
        mu=(1,), nu=(0,), lam=(1,), alpha=1, beta=0, eps=1, x=Fraction(1), aux=RatPoly.one()
    )
    result = telescope_check(plain, 5)
    assert (result.value, result.rhs_constant, result.boundary) == (119, -1, 120)

    # aux = n gives the summand n! * ((n+1)^2 - n): 3 + 14 + 78 = 95 = -1 + 96
    weighted = TelescopeSpec(
        mu=(1,), nu=(0,), lam=(1,), alpha=1, beta=0, eps=1, x=Fraction(1),
        aux=RatPoly.monomial(1),
    )
    result = telescope_check(weighted, 4)
    assert (result.value, result.rhs_constant, result.boundary) == (95, -1, 96)

    empty = telescope_check(plain, 1)
    assert empty.value == 0
    assert empty.rhs_constant + empty.boundary == 0


def test_telescope_randomized_specs():
    rng = random.Random(1234)
    for _ in range(12):
        spec = random_telescope_spec(rng)
        telescope_sweep(spec, 10)


def test_telescope_spec_validation():
    good = dict(mu=(1,), nu=(0,), lam=(1,), alpha=1, beta=0, eps=1, x=Fraction(1),
                aux=RatPoly.one())
    TelescopeSpec(**good)
    with pytest.raises(ValueError):
        TelescopeSpec(**{**good, "mu": (0,)})
    with pytest.raises(ValueError):
        TelescopeSpec(**{**good, "nu": (-1,)})  # mu + nu < 1
    with pytest.raises(ValueError):
        TelescopeSpec(**{**good, "lam": (0,)})
    with pytest.raises(ValueError):
        TelescopeSpec(**{**good, "alpha": 0})
    with pytest.raises(ValueError):
        TelescopeSpec(**{**good, "aux": RatPoly((Fraction(1, 2),))})


def test_construct_telescope_poly():
    plain = TelescopeSpec(
        mu=(1,), nu=(0,), lam=(1,), alpha=1, beta=0, eps=1, x=Fraction(1), aux=RatPoly.one()
    )
    assert construct_telescope_poly(plain, 1) == RatPoly.monomial(1)
    assert construct_telescope_poly(plain, 0) == RatPoly.constant(-1)
    # degree = deg(aux) + sum(mu_i * lam_i) for a nonzero argument
    wide = TelescopeSpec(
        mu=(1, 2), nu=(0, 0), lam=(1, 1), alpha=1, beta=0, eps=1, x=Fraction(1),
        aux=RatPoly.monomial(1),
    )
    assert construct_telescope_poly(wide, 1).degree == 4
    with pytest.raises(ConvergenceDomainError) as err:
        construct_telescope_poly(plain, Fraction(1, 2), primes=(Prime(3), Prime(2)))
    assert err.value.prime == Prime(2)


def test_construct_telescope_poly_generates_matching_summand():
    # the generated polynomial is exactly the bracket of each term at x = t
    rng = random.Random(7)
    for _ in range(6):
        spec = random_telescope_spec(rng)
        poly = construct_telescope_poly(spec, spec.x)
        for n in range(1, 6):
            bracket = (
                spec.block_product(n) * spec.aux(n + 1) * spec.x**spec.alpha
                - spec.eps * spec.aux(n)
            )
            assert poly(n) == bracket


def test_padic_sum_verify_true_and_false_claims(tables_plus):
    spec = SeriesSpec(eps=1, x=Fraction(1), k=1)
    verdict = padic_sum_verify(spec, Fraction(-1), Prime(2), 80, tables=tables_plus)
    assert verdict.passed
    # wrong claim: the error N! - 1 is odd for N >= 2, so p = 2 rejects fast
    wrong = padic_sum_verify(spec, Fraction(0), Prime(2), 80, tables=tables_plus)
    assert not wrong.passed
    assert wrong.first_violation == 2
    for p in (3, 5):
        spec2 = SeriesSpec(eps=1, x=Fraction(1), k=2)
        verdict = padic_sum_verify(spec2, Fraction(1), Prime(p), 80, tables=tables_plus)
        assert verdict.passed


def test_padic_profile_reuse_and_shift(tables_plus):
    spec = SeriesSpec(eps=1, x=Fraction(2), k=3)
    claimed = spec.claimed_sum(tables_plus)
    profile = series_error_profile(spec, claimed, 60, tables_plus)
    for p in (2, 3, 7):
        assert padic_sum_verify(spec, claimed, Prime(p), 60, profile=profile).passed
        shifted = profile.shifted_claim(1)
        assert not padic_sum_verify(spec, claimed + 1, Prime(p), 60, profile=shifted).passed


def test_padic_error_equals_boundary(tables_plus):
    # the profile errors are exactly the remainder: eps^(N-1) N! A_{k-1}(N;x) x^N
    spec = SeriesSpec(eps=-1, x=Fraction(1), k=2)
    tables = TableSet.build(2, -1)
    claimed = spec.claimed_sum(tables)
    profile = series_error_profile(spec, claimed, 20, tables)
    a = tables.gen.poly(1)
    for idx, err in enumerate(profile.errors):
        n = idx + 1
        assert err == Fraction((-1) ** (n - 1)) * factorial(n) * a.eval(n, 1)


def test_series_term_callable_profiles(tables_plus):
    spec = SeriesSpec(eps=1, x=Fraction(1), k=1)
    profile = term_val_profile(spec.term_callable(tables_plus), Prime(2), 40)
    assert profile.converges
    # the k = 1 term at x = 1 is n! * n exactly
    term = spec.term_callable(tables_plus)
    assert [term(n) for n in range(5)] == [0, 1, 4, 18, 96]
