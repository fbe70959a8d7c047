"""Dense exact polynomial arithmetic.

Two layers: ``RatPoly`` is an ordinary univariate polynomial over
``fractions.Fraction``; ``GenPoly`` is a polynomial in x whose coefficients
are ``RatPoly`` values in n, carrying a fixed sign eps in {+1, -1}.  The
sign is data, not a symbol: quantities that are usually written with a
symbolic sign are obtained by running both concrete signs and recombining
at the reporting layer.

Degrees stay small (a few hundred at most), so dense storage wins over any
sparse machinery.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Union

Scalar = Union[int, Fraction]


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"exact coefficient required, got {type(c).__name__}")


class RatPoly:
    """Univariate polynomial over exact rationals, lowest degree first.

    Canonical form: no trailing zero coefficients; the zero polynomial
    stores the empty tuple.  Instances are immutable and hashable.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [_as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def zero(cls) -> "RatPoly":
        return cls()

    @classmethod
    def one(cls) -> "RatPoly":
        return cls((1,))

    @classmethod
    def constant(cls, c: Scalar) -> "RatPoly":
        return cls((c,))

    @classmethod
    def monomial(cls, power: int, coeff: Scalar = 1) -> "RatPoly":
        if power < 0:
            raise ValueError(f"power must be >= 0, got {power}")
        return cls((0,) * power + (coeff,))

    @property
    def degree(self) -> int:
        """Degree, with the convention -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def coeff(self, i: int) -> Fraction:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, RatPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == RatPoly.constant(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other) -> "RatPoly":
        if isinstance(other, (int, Fraction)):
            other = RatPoly.constant(other)
        if not isinstance(other, RatPoly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return RatPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "RatPoly":
        return RatPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other) -> "RatPoly":
        if isinstance(other, (int, Fraction)):
            other = RatPoly.constant(other)
        if not isinstance(other, RatPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RatPoly":
        return (-self) + other

    def __mul__(self, other) -> "RatPoly":
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            return RatPoly(tuple(a * c for a in self.coeffs))
        if not isinstance(other, RatPoly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return RatPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RatPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "RatPoly":
        if e < 0:
            raise ValueError(f"exponent must be >= 0, got {e}")
        result = RatPoly.one()
        for _ in range(e):
            result = result * self
        return result

    def __call__(self, t: Scalar) -> Fraction:
        """Exact Horner evaluation."""
        t = _as_fraction(t)
        total = Fraction(0)
        for c in reversed(self.coeffs):
            total = total * t + c
        return total

    def shift(self, delta: int = 1) -> "RatPoly":
        """The polynomial q with q(n) = p(n + delta), exactly."""
        shift_factor = RatPoly((delta, 1))
        result = RatPoly.zero()
        for c in reversed(self.coeffs):
            result = result * shift_factor + c
        return result

    def derivative(self) -> "RatPoly":
        return RatPoly(tuple((i + 1) * c for i, c in enumerate(self.coeffs[1:])))

    def is_integral(self) -> bool:
        """True when every coefficient is an integer."""
        return all(c.denominator == 1 for c in self.coeffs)

    def render(self, var: str = "x") -> str:
        """Human formatting, highest degree first, e.g. ``n^2 - 3n + 3``."""
        if not self.coeffs:
            return "0"
        parts: list[str] = []
        for i in range(self.degree, -1, -1):
            c = self.coeff(i)
            if c == 0:
                continue
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                power = var if i == 1 else f"{var}^{i}"
                body = power if mag == 1 else f"{mag}{power}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"RatPoly({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        return self.render()


class GenPoly:
    """Polynomial in x whose x^j coefficient is a polynomial in n.

    The sign eps is fixed per instance, so identities like eps**2 = 1 hold
    numerically and never need symbolic simplification.  Mixed-sign
    arithmetic is refused.
    """

    __slots__ = ("eps", "coeffs")

    def __init__(self, eps: int, coeffs: Iterable[Union[RatPoly, Scalar]] = ()):
        if eps not in (1, -1):
            raise ValueError(f"eps must be +1 or -1, got {eps}")
        cs = [c if isinstance(c, RatPoly) else RatPoly.constant(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.eps = eps
        self.coeffs: tuple[RatPoly, ...] = tuple(cs)

    @classmethod
    def zero(cls, eps: int) -> "GenPoly":
        return cls(eps)

    @classmethod
    def constant(cls, eps: int, c: Union[RatPoly, Scalar]) -> "GenPoly":
        return cls(eps, (c,))

    @classmethod
    def monomial(cls, eps: int, xpower: int, npoly: Union[RatPoly, Scalar]) -> "GenPoly":
        if xpower < 0:
            raise ValueError(f"xpower must be >= 0, got {xpower}")
        return cls(eps, (RatPoly.zero(),) * xpower + (npoly if isinstance(npoly, RatPoly) else RatPoly.constant(npoly),))

    @property
    def degree_x(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, j: int) -> RatPoly:
        if 0 <= j < len(self.coeffs):
            return self.coeffs[j]
        return RatPoly.zero()

    def _check_sign(self, other: "GenPoly") -> None:
        if self.eps != other.eps:
            raise ValueError("mixed-sign arithmetic: operands carry different eps")

    def __eq__(self, other) -> bool:
        if not isinstance(other, GenPoly):
            return NotImplemented
        return self.eps == other.eps and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.eps, self.coeffs))

    def __add__(self, other) -> "GenPoly":
        if not isinstance(other, GenPoly):
            return NotImplemented
        self._check_sign(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for j, c in enumerate(b):
            out[j] = out[j] + c
        return GenPoly(self.eps, out)

    def __neg__(self) -> "GenPoly":
        return GenPoly(self.eps, tuple(-c for c in self.coeffs))

    def __sub__(self, other) -> "GenPoly":
        if not isinstance(other, GenPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other) -> "GenPoly":
        if isinstance(other, (int, Fraction, RatPoly)):
            return GenPoly(self.eps, tuple(c * other for c in self.coeffs))
        if not isinstance(other, GenPoly):
            return NotImplemented
        self._check_sign(other)
        if not self.coeffs or not other.coeffs:
            return GenPoly(self.eps)
        out = [RatPoly.zero() for _ in range(len(self.coeffs) + len(other.coeffs) - 1)]
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return GenPoly(self.eps, out)

    __rmul__ = __mul__

    def mul_xpow(self, m: int) -> "GenPoly":
        """Multiply by x**m."""
        if m < 0:
            raise ValueError(f"m must be >= 0, got {m}")
        if not self.coeffs:
            return self
        return GenPoly(self.eps, (RatPoly.zero(),) * m + self.coeffs)

    def eval(self, n: Scalar, x: Scalar) -> Fraction:
        """Substitute both variables, exactly (Horner in x)."""
        n = _as_fraction(n)
        x = _as_fraction(x)
        total = Fraction(0)
        for c in reversed(self.coeffs):
            total = total * x + c(n)
        return total

    def at_n(self, n: Scalar) -> RatPoly:
        """Evaluate the n-variable, leaving a polynomial in x."""
        return RatPoly(tuple(c(n) for c in self.coeffs))

    def at_x(self, x: Scalar) -> RatPoly:
        """Evaluate the x-variable, leaving a polynomial in n."""
        x = _as_fraction(x)
        result = RatPoly.zero()
        for c in reversed(self.coeffs):
            result = result * x + c
        return result

    def render(self, nvar: str = "n", xvar: str = "x") -> str:
        """Human formatting, e.g. ``(n^2 - 3n + 3)x^2 + (n - 5)x + 1``."""
        if not self.coeffs:
            return "0"
        parts: list[str] = []
        for j in range(self.degree_x, -1, -1):
            c = self.coeff(j)
            if c.is_zero():
                continue
            xpart = "" if j == 0 else (xvar if j == 1 else f"{xvar}^{j}")
            if c.degree <= 0:
                value = c.coeff(0)
                mag = abs(value)
                if not xpart:
                    body = str(mag)
                else:
                    body = xpart if mag == 1 else f"{mag}{xpart}"
                negative = value < 0
            else:
                body = f"({c.render(nvar)}){xpart}"
                negative = False
            if not parts:
                parts.append(body if not negative else f"-{body}")
            else:
                parts.append(f"- {body}" if negative else f"+ {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"GenPoly(eps={self.eps:+d}, {self.render()!r})"

    def __str__(self) -> str:
        return self.render()
