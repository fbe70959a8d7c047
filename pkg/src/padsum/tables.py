"""Recurrence-generated tables: generating polynomials, correction
polynomials, integer pairs, Bell numbers, closed forms, and the named
integer sequences they evaluate to.

The table of generating polynomials A_0, A_1, ... (one per sign eps) is the
single source of truth.  Everything else is derived from it:

    U_k(x) = x * A_{k-1}(1; x) - eps * A_{k-1}(0; x)
    V_k(x) = -eps * A_{k-1}(0; x)
    u_k = U_k(1),  v_k = V_k(1)       (at eps = +1)

U_k is the correction completing n^k x^k so the factorial series
sum eps^n n! [n^k x^k + U_k(x)] x^n telescopes; V_k is its closed-form sum.
Independent recurrences for U, V, u, v exist and are run as cross-checks,
never as definitions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .kernel import binomial
from .poly import GenPoly, RatPoly


class CrossCheckError(RuntimeError):
    """Two independent routes to the same table disagreed."""


def as_int(value: Fraction) -> int:
    """Exact conversion to int; raises if the value is not integral."""
    if value.denominator != 1:
        raise ValueError(f"expected an integer value, got {value}")
    return value.numerator


@dataclass(frozen=True)
class GenPolyTable:
    """Generating polynomials A_0..A_kmax for one fixed sign eps.

    A_0 = 1 and, writing A_k(n; x) = sum_j A_kj(n) x^j, each coefficient
    polynomial is pinned column by column by

        sum_{m=0}^{j} C(k+1, m) * A_{k-m, j-m}(n)
            = eps * A_{k-1, j}(n)   for j < k
            = n^k                   for j = k.
    """

    eps: int
    polys: tuple[GenPoly, ...]

    @property
    def kmax(self) -> int:
        return len(self.polys) - 1

    def poly(self, k: int) -> GenPoly:
        return self.polys[k]


def gen_poly_table(kmax: int, eps: int) -> GenPolyTable:
    """Generate A_0..A_kmax by the column-by-column recurrence."""
    if kmax < 0:
        raise ValueError(f"kmax must be >= 0, got {kmax}")
    if eps not in (1, -1):
        raise ValueError(f"eps must be +1 or -1, got {eps}")
    rows: list[list[RatPoly]] = [[RatPoly.one()]]
    for k in range(1, kmax + 1):
        row: list[RatPoly] = []
        for j in range(k + 1):
            acc = RatPoly.zero()
            for m in range(1, j + 1):
                acc = acc + binomial(k + 1, m) * rows[k - m][j - m]
            if j < k:
                row.append(eps * rows[k - 1][j] - acc)
            else:
                row.append(RatPoly.monomial(k) - acc)
        rows.append(row)
    return GenPolyTable(eps, tuple(GenPoly(eps, row) for row in rows))


@dataclass(frozen=True)
class RecurrenceReport:
    """Substitution residuals of the generating-polynomial recurrence.

    residuals[k-1] is, for each k = 1..kmax, the two-variable polynomial

        sum_{l=1}^{k+1} C(k+1, l) x^(k+1-l) A_{l-1}(n; x)
            - eps * A_{k-1}(n; x) - n^k x^k

    which must vanish identically for a correctly generated table.
    """

    residuals: tuple[GenPoly, ...]
    ok: bool
    first_bad_k: int | None


def recurrence_residuals(table: GenPolyTable) -> RecurrenceReport:
    """Re-substitute the whole family into its defining recurrence.

    This is an independent route from the generator: it works with whole
    two-variable polynomials rather than solving coefficient by
    coefficient.  A nonzero residual pinpoints the offending k.
    """
    eps = table.eps
    residuals: list[GenPoly] = []
    first_bad = None
    for k in range(1, table.kmax + 1):
        acc = GenPoly.zero(eps)
        for l in range(1, k + 2):
            acc = acc + (table.poly(l - 1) * binomial(k + 1, l)).mul_xpow(k + 1 - l)
        residual = acc - table.poly(k - 1) * eps - GenPoly.monomial(eps, k, RatPoly.monomial(k))
        residuals.append(residual)
        if first_bad is None and not residual.is_zero():
            first_bad = k
    return RecurrenceReport(tuple(residuals), first_bad is None, first_bad)


@dataclass(frozen=True)
class CorrectionPolys:
    """Correction polynomials U_k and closed-form sums V_k, k = 1..kmax.

    Index convention: u_polys[0] is U_1.  Both families have integer
    coefficients; V_k is constant in x only for k = 1.
    """

    eps: int
    u_polys: tuple[RatPoly, ...]
    v_polys: tuple[RatPoly, ...]

    @property
    def kmax(self) -> int:
        return len(self.u_polys)

    def u_poly(self, k: int) -> RatPoly:
        if not 1 <= k <= self.kmax:
            raise IndexError(f"k must be in 1..{self.kmax}, got {k}")
        return self.u_polys[k - 1]

    def v_poly(self, k: int) -> RatPoly:
        if not 1 <= k <= self.kmax:
            raise IndexError(f"k must be in 1..{self.kmax}, got {k}")
        return self.v_polys[k - 1]


def derive_corrections(table: GenPolyTable, cross_check: bool = True) -> CorrectionPolys:
    """U_k and V_k for k = 1..kmax+1, read off the generating polynomials.

    With ``cross_check`` the result is compared, polynomial for polynomial,
    against the self-contained recurrence route; disagreement is a hard
    failure.
    """
    eps = table.eps
    x = RatPoly.monomial(1)
    u_list: list[RatPoly] = []
    v_list: list[RatPoly] = []
    for k in range(1, table.kmax + 2):
        a = table.poly(k - 1)
        at_one = a.at_n(1)
        at_zero = a.at_n(0)
        u_list.append(x * at_one - eps * at_zero)
        v_list.append(-eps * at_zero)
    derived = CorrectionPolys(eps, tuple(u_list), tuple(v_list))
    if cross_check:
        direct = corrections_by_recurrence(table.kmax + 1, eps)
        for k in range(1, derived.kmax + 1):
            if derived.u_poly(k) != direct.u_poly(k):
                raise CrossCheckError(
                    f"U_{k} mismatch (eps={eps:+d}): table route {derived.u_poly(k)!r}"
                    f" vs recurrence route {direct.u_poly(k)!r}"
                )
            if derived.v_poly(k) != direct.v_poly(k):
                raise CrossCheckError(
                    f"V_{k} mismatch (eps={eps:+d}): table route {derived.v_poly(k)!r}"
                    f" vs recurrence route {direct.v_poly(k)!r}"
                )
    return derived


def corrections_by_recurrence(kmax: int, eps: int) -> CorrectionPolys:
    """U_k and V_k from their own binomial recurrences, independent of the
    generating-polynomial table.

    Seeds: U_1 = x - eps and V_1 = -eps.  For k >= 1,

        U_{k+1} = x^(k+1) + eps*U_k - sum_{l=1}^{k} C(k+1, l) x^(k+1-l) U_l
        V_{k+1} =           eps*V_k - sum_{l=1}^{k} C(k+1, l) x^(k+1-l) V_l
    """
    if kmax < 1:
        raise ValueError(f"kmax must be >= 1, got {kmax}")
    if eps not in (1, -1):
        raise ValueError(f"eps must be +1 or -1, got {eps}")
    u: dict[int, RatPoly] = {1: RatPoly((-eps, 1))}
    v: dict[int, RatPoly] = {1: RatPoly.constant(-eps)}
    for k in range(1, kmax):
        acc_u = RatPoly.zero()
        acc_v = RatPoly.zero()
        for l in range(1, k + 1):
            xpow = RatPoly.monomial(k + 1 - l)
            coef = binomial(k + 1, l)
            acc_u = acc_u + coef * xpow * u[l]
            acc_v = acc_v + coef * xpow * v[l]
        u[k + 1] = RatPoly.monomial(k + 1) + eps * u[k] - acc_u
        v[k + 1] = eps * v[k] - acc_v
    return CorrectionPolys(
        eps,
        tuple(u[k] for k in range(1, kmax + 1)),
        tuple(v[k] for k in range(1, kmax + 1)),
    )


@dataclass(frozen=True)
class IntPairTable:
    """Integer pairs (u_k, v_k) with sum_{n>=0} n! (n^k + u_k) = v_k p-adically.

    us[0] is u_1 = 0, vs[0] is v_1 = -1.
    """

    us: tuple[int, ...]
    vs: tuple[int, ...]

    @property
    def kmax(self) -> int:
        return len(self.us)

    def u(self, k: int) -> int:
        if not 1 <= k <= self.kmax:
            raise IndexError(f"k must be in 1..{self.kmax}, got {k}")
        return self.us[k - 1]

    def v(self, k: int) -> int:
        if not 1 <= k <= self.kmax:
            raise IndexError(f"k must be in 1..{self.kmax}, got {k}")
        return self.vs[k - 1]


def int_pairs(kmax: int, cross_check: bool = True) -> IntPairTable:
    """(u_k, v_k) for k = 1..kmax by their binomial recurrences.

        u_{k+1} = -k*u_k - sum_{l=1}^{k-1} C(k+1, l) u_l + 1,   u_1 = 0
        v_{k+1} = -k*v_k - sum_{l=1}^{k-1} C(k+1, l) v_l,       v_1 = -1

    With ``cross_check`` (the default) the result must agree with
    U_k(1), V_k(1) from the generating-polynomial route at eps = +1;
    switch it off for long evidence sweeps where only the integers matter.
    """
    if kmax < 1:
        raise ValueError(f"kmax must be >= 1, got {kmax}")
    u: dict[int, int] = {1: 0}
    v: dict[int, int] = {1: -1}
    for k in range(1, kmax):
        su = sum(binomial(k + 1, l) * u[l] for l in range(1, k))
        sv = sum(binomial(k + 1, l) * v[l] for l in range(1, k))
        u[k + 1] = -k * u[k] - su + 1
        v[k + 1] = -k * v[k] - sv
    table = IntPairTable(
        tuple(u[k] for k in range(1, kmax + 1)),
        tuple(v[k] for k in range(1, kmax + 1)),
    )
    if cross_check:
        corr = derive_corrections(gen_poly_table(kmax - 1, 1), cross_check=False)
        for k in range(1, kmax + 1):
            if table.u(k) != corr.u_poly(k)(1) or table.v(k) != corr.v_poly(k)(1):
                raise CrossCheckError(
                    f"(u_{k}, v_{k}) = ({table.u(k)}, {table.v(k)}) disagrees with"
                    f" (U_{k}(1), V_{k}(1)) = ({corr.u_poly(k)(1)}, {corr.v_poly(k)(1)})"
                )
    return table


@dataclass(frozen=True)
class AuxSolution:
    """Solution of the telescoping linear system for one k: the auxiliary
    polynomial A(n) and the integers (u, v) with

        (n+1) A(n+1) - A(n) = n^k + u,    v = -A(0).
    """

    poly: RatPoly
    u: int
    v: int


def _solve_exact(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Gauss-Jordan elimination over Fraction; raises on a singular system."""
    n = len(matrix)
    aug = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise ArithmeticError("singular linear system")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = Fraction(1) / aug[col][col]
        aug[col] = [c * inv for c in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]


def aux_poly(k: int) -> AuxSolution:
    """Solve the (k+1) x (k+1) linear system behind the weight-(n+1)
    telescoping step.

    Unknowns are the coefficients a_0..a_{k-1} of A(n) plus u; equating the
    coefficient of n^j in (n+1) A(n+1) - A(n) - u with that of n^k gives one
    equation per j = 0..k.  The system is always solvable and its solution
    is integral; both facts are asserted.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    size = k + 1
    matrix = [[Fraction(0)] * size for _ in range(size)]
    rhs = [Fraction(0)] * size
    for j in range(size):
        for i in range(k):
            matrix[j][i] = Fraction(binomial(i + 1, j) - (1 if i == j else 0))
        matrix[j][k] = Fraction(-1) if j == 0 else Fraction(0)
        rhs[j] = Fraction(1) if j == k else Fraction(0)
    solution = _solve_exact(matrix, rhs)
    poly = RatPoly(solution[:k])
    if not poly.is_integral() or solution[k].denominator != 1:
        raise ArithmeticError(f"non-integral telescoping solution at k={k}: {solution}")
    u = as_int(solution[k])
    v = as_int(-poly(0))
    return AuxSolution(poly, u, v)


def bell_numbers(kmax: int) -> tuple[int, ...]:
    """Bell numbers B_0..B_kmax via B_{k+1} = sum_l C(k, l) B_l, B_0 = 1."""
    if kmax < 0:
        raise ValueError(f"kmax must be >= 0, got {kmax}")
    b = [1]
    for k in range(kmax):
        b.append(sum(binomial(k, l) * b[l] for l in range(k + 1)))
    return tuple(b)


def diagonal_closed_form(k: int) -> RatPoly:
    """Closed form of the top x-coefficient A_kk(n): the n^i coefficient is
    (-1)^(k+i) C(k+1, i+1), independent of the sign eps."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return RatPoly([(-1) ** (k + i) * binomial(k + 1, i + 1) for i in range(k + 1)])


def linear_closed_form(k: int, eps: int) -> RatPoly:
    """Closed form of the x^1 coefficient: (n - k(k+3)/2) * eps^(k+1).

    The constant k(k+3)/2 is the sum 2 + 3 + ... + (k+1).
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if eps not in (1, -1):
        raise ValueError(f"eps must be +1 or -1, got {eps}")
    sign = eps ** (k + 1)
    return RatPoly([-k * (k + 3) // 2 * sign, sign])


def closed_forms(k: int, eps: int) -> tuple[RatPoly, RatPoly]:
    """The pair (A_kk, A_k1) of closed-form coefficient polynomials."""
    return diagonal_closed_form(k), linear_closed_form(k, eps)


# The twelve named evaluations: generating polynomials and corrections at
# n in {0, 1}, x in {+1, -1}, both signs.  Several overlap known OEIS
# entries up to sign (A014619, A040027, A007114, A032347 for the A-families;
# A000587 and A000110, the complementary Bell and Bell numbers, for U).
SEQUENCE_IDS: dict[str, tuple[str, int, int | None, int]] = {
    "A+0,1": ("A", 1, 0, 1),
    "A+0,-1": ("A", 1, 0, -1),
    "A+1,1": ("A", 1, 1, 1),
    "A+1,-1": ("A", 1, 1, -1),
    "A-0,1": ("A", -1, 0, 1),
    "A-0,-1": ("A", -1, 0, -1),
    "A-1,1": ("A", -1, 1, 1),
    "A-1,-1": ("A", -1, 1, -1),
    "U+1": ("U", 1, None, 1),
    "U+-1": ("U", 1, None, -1),
    "U-1": ("U", -1, None, 1),
    "U--1": ("U", -1, None, -1),
}


def sequence_start_index(which: str) -> int:
    """First index of the named sequence: 0 for A-families, 1 for U-families."""
    family = _sequence_params(which)[0]
    return 0 if family == "A" else 1


def _sequence_params(which: str) -> tuple[str, int, int | None, int]:
    try:
        return SEQUENCE_IDS[which]
    except KeyError:
        valid = ", ".join(sorted(SEQUENCE_IDS))
        raise ValueError(f"unknown sequence id {which!r}; valid ids: {valid}") from None


def sequence_slice(which: str, kmax: int) -> list[int]:
    """Evaluate a named family at its fixed point.

    A-families run over k = 0..kmax, U-families over k = 1..kmax.  All
    values are integers.
    """
    family, eps, n, x = _sequence_params(which)
    if family == "A":
        table = gen_poly_table(kmax, eps)
        return [as_int(table.poly(k).eval(n, x)) for k in range(kmax + 1)]
    if kmax < 1:
        raise ValueError(f"U-sequences need kmax >= 1, got {kmax}")
    corr = derive_corrections(gen_poly_table(kmax - 1, eps), cross_check=False)
    return [as_int(corr.u_poly(k)(x)) for k in range(1, kmax + 1)]


def eps_split(plus: GenPoly, minus: GenPoly) -> list[tuple[RatPoly, RatPoly]]:
    """Recombine the two concrete-sign runs into (even, odd) parts per x^j.

    ``even + sign * odd`` reproduces either run; this is how symbolic-sign
    output is reconstructed without any symbolic algebra.
    """
    if plus.eps != 1 or minus.eps != -1:
        raise ValueError("expected a (+1)-run and a (-1)-run, in that order")
    half = Fraction(1, 2)
    deg = max(plus.degree_x, minus.degree_x)
    return [
        ((plus.coeff(j) + minus.coeff(j)) * half, (plus.coeff(j) - minus.coeff(j)) * half)
        for j in range(deg + 1)
    ]


def render_symbolic(plus: GenPoly, minus: GenPoly, eps_symbol: str = "e") -> str:
    """Symbolic-sign rendering built from both runs, e.g.
    ``(n^2 - 3n + 3)x^2 + (n - 5)e x + 1``."""
    pairs = eps_split(plus, minus)
    parts: list[str] = []
    for j in range(len(pairs) - 1, -1, -1):
        even, odd = pairs[j]
        xpart = "" if j == 0 else ("x" if j == 1 else f"x^{j}")
        for poly, marker in ((even, ""), (odd, eps_symbol)):
            if poly.is_zero():
                continue
            negative = False
            if poly.degree <= 0:
                value = poly.coeff(0)
                mag = abs(value)
                negative = value < 0
                if mag == 1 and (marker or xpart):
                    coeff_txt = ""
                else:
                    coeff_txt = str(mag)
            else:
                coeff_txt = f"({poly.render('n')})"
            body = coeff_txt + marker
            if xpart:
                body = body + (" " if marker else "") + xpart if body else xpart
            if not body:
                body = "1"
            if not parts:
                parts.append(f"-{body}" if negative else body)
            else:
                parts.append(f"- {body}" if negative else f"+ {body}")
    return " ".join(parts) if parts else "0"


@dataclass(frozen=True)
class TableSet:
    """A generating-polynomial table with its derived corrections."""

    gen: GenPolyTable
    corr: CorrectionPolys

    @property
    def eps(self) -> int:
        return self.gen.eps

    @property
    def kmax(self) -> int:
        return self.gen.kmax

    @classmethod
    def build(cls, kmax: int, eps: int, cross_check: bool = True) -> "TableSet":
        """Generate A_0..A_kmax plus U/V through kmax+1.

        With ``cross_check`` the table is re-substituted into its recurrence
        and the corrections are compared against their independent route.
        """
        table = gen_poly_table(kmax, eps)
        if cross_check:
            report = recurrence_residuals(table)
            if not report.ok:
                raise CrossCheckError(
                    f"generating-polynomial residual nonzero at k={report.first_bad_k}"
                )
        corr = derive_corrections(table, cross_check=cross_check)
        return cls(table, corr)


def _poly_ints(poly: RatPoly) -> list[int]:
    return [as_int(c) for c in poly.coeffs]


def bundle_to_json(tables: TableSet, pairs: IntPairTable | None) -> dict:
    """JSON-ready dict for a table bundle.

    Layout: A[k][j][i] is the n^i coefficient of the x^j coefficient of
    A_k; U[k-1] / V[k-1] are the x-coefficients of U_k / V_k (trimmed to
    k <= kmax so that kmax = 0 carries A_0 alone); u/v are the integer
    pairs.  All coefficients are exact integers.
    """
    kmax = tables.kmax
    return {
        "eps": tables.eps,
        "kmax": kmax,
        "A": [
            [_poly_ints(tables.gen.poly(k).coeff(j)) for j in range(k + 1)]
            for k in range(kmax + 1)
        ],
        "U": [_poly_ints(tables.corr.u_poly(k)) for k in range(1, kmax + 1)],
        "V": [_poly_ints(tables.corr.v_poly(k)) for k in range(1, kmax + 1)],
        "u": list(pairs.us) if pairs is not None else [],
        "v": list(pairs.vs) if pairs is not None else [],
    }


def bundle_from_json(data: dict) -> tuple[TableSet, IntPairTable | None]:
    """Rebuild a bundle produced by :func:`bundle_to_json` (no re-generation)."""
    eps = data["eps"]
    polys = tuple(
        GenPoly(eps, [RatPoly(coeffs) for coeffs in row]) for row in data["A"]
    )
    gen = GenPolyTable(eps, polys)
    corr = CorrectionPolys(
        eps,
        tuple(RatPoly(c) for c in data["U"]),
        tuple(RatPoly(c) for c in data["V"]),
    )
    pairs = IntPairTable(tuple(data["u"]), tuple(data["v"])) if data["u"] else None
    return TableSet(gen, corr), pairs
