"""Exact partial sums of factorial series, telescoping identities, and
p-adic verification of claimed infinite sums.

Every check here is exact: partial sums, boundary terms and closed-form
constants are all computed as big rationals, and an identity either has a
zero residual or the check fails loudly.  The only graded outcome is the
p-adic verdict, which compares the valuation growth of the partial-sum
error against the exact remainder bound.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .kernel import factorial, rising_block
from .padic import (
    ConvergenceParams,
    Prime,
    Valuation,
    convergence_threshold,
    in_convergence_domain,
    val_factorial,
    val_rat,
)
from .poly import RatPoly
from .tables import TableSet


class VerificationError(RuntimeError):
    """An identity that must hold exactly has a nonzero residual."""

    def __init__(self, message: str, result: "PartialSumResult | None" = None):
        super().__init__(message)
        self.result = result


class ConvergenceDomainError(ValueError):
    """An evaluation point lies outside the p-adic convergence domain."""

    def __init__(self, x: Fraction, prime: Prime, threshold: Fraction):
        super().__init__(
            f"x = {x} is outside the convergence domain for p = {prime}:"
            f" v_p(x) must exceed {threshold}"
        )
        self.x = x
        self.prime = prime
        self.threshold = threshold


@dataclass(frozen=True)
class PartialSumResult:
    """One checked instance of a finite summation identity.

    The invariant under test is value = rhs_constant + boundary, exactly;
    ``residual`` is the difference and must be zero.
    """

    n_terms: int
    value: Fraction
    rhs_constant: Fraction
    boundary: Fraction

    @property
    def residual(self) -> Fraction:
        return self.value - self.rhs_constant - self.boundary

    def report(self, check: str, params: dict) -> dict:
        return {
            "check": check,
            "params": params,
            "n_terms": self.n_terms,
            "value": str(self.value),
            "rhs_constant": str(self.rhs_constant),
            "boundary": str(self.boundary),
            "residual": str(self.residual),
            "verdict": "PASS" if self.residual == 0 else "FAIL",
        }


def power_sum(k: int, eps: int, x: Fraction | int, n: int) -> Fraction:
    """sum_{i=0}^{n-1} eps^i * i! * i^k * x^i, exactly.

    Uses 0^0 = 1 (Python's convention), so the k = 0 sum starts with the
    i = 0 term equal to 1.
    """
    if k < 0 or n < 0:
        raise ValueError("k and n must be >= 0")
    if eps not in (1, -1):
        raise ValueError(f"eps must be +1 or -1, got {eps}")
    x = Fraction(x)
    total = Fraction(0)
    running = Fraction(1)  # eps^i * i! * x^i
    for i in range(n):
        if i:
            running *= eps * i * x
        total += running * i**k
    return total


def power_sum_via_recurrence(k: int, eps: int, x: Fraction | int, n: int) -> Fraction:
    """The (k+1)-power sum S_{k+1} obtained from directly computed lower ones.

    Solving the binomial recurrence

        S_k = d_{0k} + eps*x*S_0 + eps*x * sum_{l=1}^{k+1} C(k+1, l) S_l
              - eps^n n! n^k x^n

    for its top term gives an independent route to S_{k+1}; it must agree
    with the direct sum exactly.  Requires x != 0.
    """
    from .kernel import binomial

    x = Fraction(x)
    if x == 0:
        raise ValueError("the recurrence route needs x != 0")
    s = [power_sum(l, eps, x, n) for l in range(k + 1)]
    delta = 1 if k == 0 else 0
    acc = s[k] - delta - eps * x * s[0]
    acc -= eps * x * sum(binomial(k + 1, l) * s[l] for l in range(1, k + 1))
    tail = Fraction(eps**n) * factorial(n) * n**k * x**n
    return (acc + tail) / (eps * x)


def finite_identity_check(
    k: int, eps: int, x: Fraction | int, n: int, tables: TableSet
) -> PartialSumResult:
    """Check sum_{i<n} eps^i i! [i^k x^k + U_k(x)] x^i
    = V_k(x) + eps^(n-1) n! A_{k-1}(n; x) x^n, exactly.

    A nonzero residual means a broken table or engine and raises with the
    full operands.
    """
    if k < 1 or n < 1:
        raise ValueError("k and n must be >= 1")
    x = Fraction(x)
    u_k = tables.corr.u_poly(k)(x)
    v_k = tables.corr.v_poly(k)(x)
    a = tables.gen.poly(k - 1)
    total = Fraction(0)
    running = Fraction(1)
    xk = x**k
    for i in range(n):
        if i:
            running *= eps * i * x
        total += running * (i**k * xk + u_k)
    boundary = Fraction(eps ** (n - 1)) * factorial(n) * a.eval(n, x) * x**n
    result = PartialSumResult(n, total, v_k, boundary)
    if result.residual != 0:
        raise VerificationError(
            f"finite identity residual {result.residual} != 0 at"
            f" k={k} eps={eps:+d} x={x} n={n}"
            f" (value={result.value}, rhs={result.rhs_constant}, boundary={result.boundary})",
            result,
        )
    return result


def finite_identity_sweep(
    k: int, eps: int, x: Fraction | int, n_max: int, tables: TableSet
) -> list[PartialSumResult]:
    """Run the finite identity for every n = 1..n_max with one incremental
    partial sum; raises on the first nonzero residual."""
    if k < 1 or n_max < 1:
        raise ValueError("k and n_max must be >= 1")
    x = Fraction(x)
    u_k = tables.corr.u_poly(k)(x)
    v_k = tables.corr.v_poly(k)(x)
    a = tables.gen.poly(k - 1)
    xk = x**k
    results: list[PartialSumResult] = []
    running = Fraction(1)  # eps^i i! x^i at i = 0
    partial = u_k  # the i = 0 term: 0^k x^k + U_k(x) with k >= 1
    xn = Fraction(1)
    for n in range(1, n_max + 1):
        xn *= x
        boundary = Fraction(eps ** (n - 1)) * factorial(n) * a.eval(n, x) * xn
        result = PartialSumResult(n, partial, v_k, boundary)
        if result.residual != 0:
            raise VerificationError(
                f"finite identity residual {result.residual} != 0 at"
                f" k={k} eps={eps:+d} x={x} n={n}",
                result,
            )
        results.append(result)
        running *= eps * n * x
        partial += running * (n**k * xk + u_k)
    return results


@dataclass(frozen=True)
class SeriesSpec:
    """The factorial power series sum_n eps^n n! P(n; x) x^n.

    Either the single-power form P(n; x) = n^k x^k + U_k(x) (field ``k``)
    or the general rational combination
    P(n; x) = sum_j C_j [n^j x^j + U_j(x)] (field ``coeffs``, C_1..C_k).
    """

    eps: int
    x: Fraction
    k: int | None = None
    coeffs: tuple[Fraction, ...] | None = None

    def __post_init__(self) -> None:
        if self.eps not in (1, -1):
            raise ValueError(f"eps must be +1 or -1, got {self.eps}")
        object.__setattr__(self, "x", Fraction(self.x))
        if (self.k is None) == (self.coeffs is None):
            raise ValueError("exactly one of k and coeffs must be given")
        if self.k is not None and self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.coeffs is not None:
            coeffs = tuple(Fraction(c) for c in self.coeffs)
            if not coeffs or coeffs[-1] == 0:
                raise ValueError("coeffs must be nonempty with nonzero top coefficient")
            object.__setattr__(self, "coeffs", coeffs)

    @property
    def order(self) -> int:
        return self.k if self.k is not None else len(self.coeffs)

    def as_coeffs(self) -> tuple[Fraction, ...]:
        if self.coeffs is not None:
            return self.coeffs
        return (Fraction(0),) * (self.k - 1) + (Fraction(1),)

    def claimed_sum(self, tables: TableSet) -> Fraction:
        """The closed-form value sum_j C_j V_j(x)."""
        coeffs = self.as_coeffs()
        return sum(
            (c * tables.corr.v_poly(j)(self.x) for j, c in enumerate(coeffs, 1)),
            Fraction(0),
        )

    def summand_poly_values(self, tables: TableSet) -> tuple[Fraction, ...]:
        """U_j(x) for j = 1..order, precomputed for term generation."""
        return tuple(tables.corr.u_poly(j)(self.x) for j in range(1, self.order + 1))

    def term_callable(self, tables: TableSet) -> Callable[[int], Fraction]:
        """term(i) = eps^i i! P(i; x) x^i, for valuation profiling."""
        coeffs = self.as_coeffs()
        u_vals = self.summand_poly_values(tables)
        x = self.x
        eps = self.eps

        def term(i: int) -> Fraction:
            p_val = sum(
                (c * (i**j * x**j + u_vals[j - 1]) for j, c in enumerate(coeffs, 1)),
                Fraction(0),
            )
            return Fraction(eps**i) * factorial(i) * p_val * x**i

        return term


def general_sum_check(spec: SeriesSpec, n: int, tables: TableSet) -> PartialSumResult:
    """Check the rational-combination identity

        sum_{i<n} eps^i i! P(i; x) x^i
            = sum_j C_j V_j(x) + eps^(n-1) n! x^n sum_j C_j A_{j-1}(n; x)

    exactly, by linearity of the single-power identity."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    coeffs = spec.as_coeffs()
    if tables.corr.kmax < len(coeffs):
        raise ValueError(f"tables cover k <= {tables.corr.kmax}, need {len(coeffs)}")
    x = spec.x
    eps = spec.eps
    u_vals = spec.summand_poly_values(tables)
    rhs = spec.claimed_sum(tables)
    total = Fraction(0)
    running = Fraction(1)
    for i in range(n):
        if i:
            running *= eps * i * x
        p_val = sum(
            (c * (i**j * x**j + u_vals[j - 1]) for j, c in enumerate(coeffs, 1)),
            Fraction(0),
        )
        total += running * p_val
    a_sum = sum(
        (c * tables.gen.poly(j - 1).eval(n, x) for j, c in enumerate(coeffs, 1)),
        Fraction(0),
    )
    boundary = Fraction(eps ** (n - 1)) * factorial(n) * x**n * a_sum
    result = PartialSumResult(n, total, rhs, boundary)
    if result.residual != 0:
        raise VerificationError(
            f"general sum residual {result.residual} != 0 at"
            f" coeffs={coeffs} eps={eps:+d} x={x} n={n}",
            result,
        )
    return result


@dataclass(frozen=True)
class TelescopeSpec:
    """Parameters of the general factorial telescoping identity.

    The n-th term is

        eps^n * prod_i ((mu_i n + nu_i)!)^lam_i
              * [prod_i block_i(n) * aux(n+1) * x^alpha - eps * aux(n)]
              * x^(alpha n + beta)

    where block_i(n) = ((mu_i n + nu_i + 1) ... (mu_i n + nu_i + mu_i))^lam_i,
    so the term equals G(n+1) - G(n) for the boundary function

        G(n) = eps^(n-1) * prod_i ((mu_i n + nu_i)!)^lam_i * aux(n)
               * x^(alpha n + beta)

    and partial sums collapse to boundary values.  Constraints: mu_i >= 1,
    mu_i + nu_i >= 1, lam_i >= 0 with at least one lam_i >= 1, alpha >= 1,
    beta >= 0, and aux has integer coefficients.
    """

    mu: tuple[int, ...]
    nu: tuple[int, ...]
    lam: tuple[int, ...]
    alpha: int
    beta: int
    eps: int
    x: Fraction
    aux: RatPoly

    def __post_init__(self) -> None:
        object.__setattr__(self, "mu", tuple(self.mu))
        object.__setattr__(self, "nu", tuple(self.nu))
        object.__setattr__(self, "lam", tuple(self.lam))
        object.__setattr__(self, "x", Fraction(self.x))
        if not (len(self.mu) == len(self.nu) == len(self.lam)) or not self.mu:
            raise ValueError("mu, nu, lam must be equal-length, nonempty")
        if any(m < 1 for m in self.mu):
            raise ValueError(f"every mu_i must be >= 1, got {self.mu}")
        if any(m + v < 1 for m, v in zip(self.mu, self.nu)):
            raise ValueError(f"every mu_i + nu_i must be >= 1, got {list(zip(self.mu, self.nu))}")
        if any(l < 0 for l in self.lam) or not any(self.lam):
            raise ValueError(f"lam_i >= 0 with at least one >= 1 required, got {self.lam}")
        if self.alpha < 1:
            raise ValueError(f"alpha must be >= 1, got {self.alpha}")
        if self.beta < 0:
            raise ValueError(f"beta must be >= 0, got {self.beta}")
        if self.eps not in (1, -1):
            raise ValueError(f"eps must be +1 or -1, got {self.eps}")
        if not isinstance(self.aux, RatPoly):
            raise TypeError("aux must be a RatPoly")
        if not self.aux.is_integral():
            raise ValueError(f"aux must have integer coefficients, got {self.aux!r}")

    def convergence_params(self) -> ConvergenceParams:
        return ConvergenceParams(self.alpha, sum(m * l for m, l in zip(self.mu, self.lam)))

    def factorial_product(self, n: int) -> int:
        prod = 1
        for m, v, l in zip(self.mu, self.nu, self.lam):
            prod *= factorial(m * n + v) ** l
        return prod

    def block_product(self, n: int) -> int:
        prod = 1
        for m, v, l in zip(self.mu, self.nu, self.lam):
            prod *= rising_block(m * n + v, m, l)
        return prod

    def term(self, n: int) -> Fraction:
        bracket = (
            self.block_product(n) * self.aux(n + 1) * self.x**self.alpha
            - self.eps * self.aux(n)
        )
        return (
            Fraction(self.eps**n)
            * self.factorial_product(n)
            * bracket
            * self.x ** (self.alpha * n + self.beta)
        )

    def boundary(self, n: int) -> Fraction:
        """G(n): the value partial sums telescope to."""
        return (
            Fraction(self.eps ** (n - 1))
            * self.factorial_product(n)
            * self.aux(n)
            * self.x ** (self.alpha * n + self.beta)
        )

    def rhs_constant(self) -> Fraction:
        return -self.boundary(1)


def telescope_check(spec: TelescopeSpec, n_terms: int) -> PartialSumResult:
    """Check sum_{n=1}^{N-1} term(n) = -G(1) + G(N), exactly (N = n_terms).

    N = 1 is the empty sum, which the boundary values must already balance.
    """
    if n_terms < 1:
        raise ValueError(f"n_terms must be >= 1, got {n_terms}")
    partial = sum((spec.term(n) for n in range(1, n_terms)), Fraction(0))
    result = PartialSumResult(n_terms, partial, spec.rhs_constant(), spec.boundary(n_terms))
    if result.residual != 0:
        raise VerificationError(
            f"telescoping residual {result.residual} != 0 at N={n_terms} for {spec}",
            result,
        )
    return result


def telescope_sweep(spec: TelescopeSpec, n_max: int) -> list[PartialSumResult]:
    """Telescoping check at every N = 1..n_max with one incremental sum."""
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    rhs = spec.rhs_constant()
    results: list[PartialSumResult] = []
    partial = Fraction(0)
    for n in range(1, n_max + 1):
        result = PartialSumResult(n, partial, rhs, spec.boundary(n))
        if result.residual != 0:
            raise VerificationError(
                f"telescoping residual {result.residual} != 0 at N={n} for {spec}",
                result,
            )
        results.append(result)
        partial += spec.term(n)
    return results


def random_telescope_spec(rng: random.Random) -> TelescopeSpec:
    """Sample a valid spec within the documented verification bounds:
    at most two factorial factors, mu <= 3, |nu| <= 2, lam <= 2, alpha <= 2,
    beta <= 1, deg aux <= 2 with small integer coefficients, |x| <= 2."""
    count = rng.randint(1, 2)
    mu, nu, lam = [], [], []
    for _ in range(count):
        m = rng.randint(1, 3)
        mu.append(m)
        nu.append(rng.randint(max(1 - m, -2), 2))
        lam.append(rng.randint(0, 2))
    if not any(lam):
        lam[rng.randrange(count)] = rng.randint(1, 2)
    degree = rng.randint(0, 2)
    coeffs = [rng.randint(-3, 3) for _ in range(degree + 1)]
    coeffs[-1] = rng.choice([c for c in range(-3, 4) if c != 0])
    x = rng.choice(
        [Fraction(v) for v in (-2, -1, 1, 2)]
        + [Fraction(1, 2), Fraction(-1, 2), Fraction(3, 2), Fraction(-3, 2)]
    )
    return TelescopeSpec(
        mu=tuple(mu),
        nu=tuple(nu),
        lam=tuple(lam),
        alpha=rng.randint(1, 2),
        beta=rng.randint(0, 1),
        eps=rng.choice((1, -1)),
        x=x,
        aux=RatPoly(coeffs),
    )


def construct_telescope_poly(
    spec: TelescopeSpec, t: Fraction | int, primes: Sequence[Prime] = ()
) -> RatPoly:
    """The summand polynomial P(n; t) the telescoping family generates:

        P(n; t) = prod_i block_i(n) * aux(n+1) * t^alpha - eps * aux(n)

    as a polynomial in n.  For t != 0 its degree is
    deg(aux) + sum_i mu_i * lam_i.  Any supplied primes gate t against the
    convergence domain; the first failing prime is reported.
    """
    t = Fraction(t)
    params = spec.convergence_params()
    for p in primes:
        if not in_convergence_domain(t, p, params):
            raise ConvergenceDomainError(t, p, convergence_threshold(params, p))
    block = RatPoly.one()
    for m, v, l in zip(spec.mu, spec.nu, spec.lam):
        for s in range(1, m + 1):
            block = block * RatPoly((v + s, m)) ** l
    return block * spec.aux.shift(1) * t**spec.alpha - spec.eps * spec.aux


@dataclass(frozen=True)
class SeriesErrorProfile:
    """Exact partial-sum errors of a series against a claimed sum.

    errors[N-1] = partial_sum(N) - claimed and remainder_factors[N-1] =
    sum_j C_j A_{j-1}(N; x), for N = 1..n_max.  Computing the profile once
    lets several primes (or a perturbed claim) reuse the same big rationals.
    """

    spec: SeriesSpec
    claimed: Fraction
    errors: tuple[Fraction, ...]
    remainder_factors: tuple[Fraction, ...]

    def shifted_claim(self, delta: Fraction | int) -> "SeriesErrorProfile":
        delta = Fraction(delta)
        return SeriesErrorProfile(
            self.spec,
            self.claimed + delta,
            tuple(e - delta for e in self.errors),
            self.remainder_factors,
        )


def series_error_profile(
    spec: SeriesSpec, claimed: Fraction | int, n_max: int, tables: TableSet
) -> SeriesErrorProfile:
    """Partial-sum errors and remainder factors for N = 1..n_max."""
    claimed = Fraction(claimed)
    coeffs = spec.as_coeffs()
    if tables.corr.kmax < len(coeffs):
        raise ValueError(f"tables cover k <= {tables.corr.kmax}, need {len(coeffs)}")
    x = spec.x
    eps = spec.eps
    u_vals = spec.summand_poly_values(tables)
    a_polys = [tables.gen.poly(j - 1) for j in range(1, len(coeffs) + 1)]
    errors: list[Fraction] = []
    factors: list[Fraction] = []
    running = Fraction(1)
    partial = Fraction(0)
    for n in range(1, n_max + 1):
        i = n - 1
        if i:
            running *= eps * i * x
        p_val = sum(
            (c * (i**j * x**j + u_vals[j - 1]) for j, c in enumerate(coeffs, 1)),
            Fraction(0),
        )
        partial += running * p_val
        errors.append(partial - claimed)
        factors.append(
            sum((c * a_polys[j - 1].eval(n, x) for j, c in enumerate(coeffs, 1)), Fraction(0))
        )
    return SeriesErrorProfile(spec, claimed, tuple(errors), tuple(factors))


@dataclass(frozen=True)
class PadicVerdict:
    """Outcome of the valuation-growth check of a claimed sum.

    PASS means v_p(partial_sum(N) - claimed) met the exact remainder bound
    v_p(N!) + N*v_p(x) + v_p(remainder factor) at every sampled N; the
    bound diverges, so a wrong claim must eventually violate it.
    """

    prime: Prime
    passed: bool
    first_violation: int | None
    valuations: tuple[Valuation, ...]
    bounds: tuple[Valuation, ...]

    def report(self, params: dict) -> dict:
        return {
            "check": "padic-sum",
            "params": params,
            "p": self.prime.value,
            "n_max": len(self.valuations),
            "first_violation": self.first_violation,
            "verdict": "PASS" if self.passed else "FAIL",
        }


def padic_sum_verify(
    spec: SeriesSpec,
    claimed: Fraction | int,
    p: Prime,
    n_max: int,
    tables: TableSet | None = None,
    profile: SeriesErrorProfile | None = None,
) -> PadicVerdict:
    """Verify a claimed sum by p-adic valuation growth of partial-sum errors.

    For every N = 1..n_max the error partial_sum(N) - claimed must have
    valuation at least v_p(N!) + N*v_p(x) + v_p(sum_j C_j A_{j-1}(N; x)),
    the exact valuation of the known remainder.  The first violating N is
    reported on FAIL.  A precomputed ``profile`` is reused (it is
    prime-independent).
    """
    if profile is None:
        if tables is None:
            tables = TableSet.build(spec.order, spec.eps)
        profile = series_error_profile(spec, claimed, n_max, tables)
    vx = val_rat(spec.x, p)
    valuations: list[Valuation] = []
    bounds: list[Valuation] = []
    first_violation: int | None = None
    for idx, err in enumerate(profile.errors):
        n = idx + 1
        bound = val_factorial(n, p) + vx * n + val_rat(profile.remainder_factors[idx], p)
        value = val_rat(err, p)
        valuations.append(value)
        bounds.append(bound)
        if first_violation is None and not value >= bound:
            first_violation = n
    return PadicVerdict(p, first_violation is None, first_violation, tuple(valuations), tuple(bounds))
