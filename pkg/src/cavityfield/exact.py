"""Exact scalar layer: rational-complex numbers and amplitude polynomials.

The operator algebra keeps every coefficient as a polynomial in a complex
displacement amplitude ("alpha") and its conjugate, over exact rational
complex numbers.  Identities between operator expressions are then plain
equalities; floating point enters only when a caller evaluates a polynomial
numerically.

Floats coerce through their exact binary expansion, so folding a numeric
prefactor into a polynomial and evaluating it back is lossless.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Union

Scalar = Union["RationalComplex", int, float, complex, Fraction]


@dataclass(frozen=True)
class RationalComplex:
    """Complex number with exact rational real and imaginary parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    @staticmethod
    def coerce(value: Scalar) -> "RationalComplex":
        if isinstance(value, RationalComplex):
            return value
        if isinstance(value, (int, Fraction)):
            return RationalComplex(Fraction(value))
        if isinstance(value, float):
            return RationalComplex(Fraction(value))
        if isinstance(value, complex):
            return RationalComplex(Fraction(value.real), Fraction(value.imag))
        raise TypeError(f"cannot interpret {value!r} as an exact complex rational")

    @property
    def is_zero(self) -> bool:
        return not self.re and not self.im

    def conjugate(self) -> "RationalComplex":
        return RationalComplex(self.re, -self.im)

    def __add__(self, other: Scalar) -> "RationalComplex":
        o = RationalComplex.coerce(other)
        return RationalComplex(self.re + o.re, self.im + o.im)

    def __sub__(self, other: Scalar) -> "RationalComplex":
        o = RationalComplex.coerce(other)
        return RationalComplex(self.re - o.re, self.im - o.im)

    def __neg__(self) -> "RationalComplex":
        return RationalComplex(-self.re, -self.im)

    def __mul__(self, other: Scalar) -> "RationalComplex":
        o = RationalComplex.coerce(other)
        return RationalComplex(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    def __truediv__(self, other: Scalar) -> "RationalComplex":
        o = RationalComplex.coerce(other)
        denom = o.re * o.re + o.im * o.im
        if not denom:
            raise ZeroDivisionError("division by zero rational complex")
        return RationalComplex(
            (self.re * o.re + self.im * o.im) / denom,
            (self.im * o.re - self.re * o.im) / denom,
        )

    __radd__ = __add__
    __rmul__ = __mul__

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}j"
        sign = "+" if self.im >= 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}j)"


RC_ZERO = RationalComplex()
RC_ONE = RationalComplex(Fraction(1))
RC_I = RationalComplex(Fraction(0), Fraction(1))


def _clean_terms(
    acc: Mapping[tuple[int, int], RationalComplex],
) -> tuple[tuple[int, int, RationalComplex], ...]:
    return tuple(
        (p, q, c) for (p, q), c in sorted(acc.items()) if not c.is_zero
    )


@dataclass(frozen=True)
class CoeffPoly:
    """Exact polynomial in the displacement amplitude and its conjugate.

    Each stored term is ``(p, q, coeff)``: ``p`` powers of the amplitude and
    ``q`` powers of its conjugate.  Zero coefficients are never stored and
    terms stay sorted by ``(p, q)``, making equality and hashing structural.
    """

    terms: tuple[tuple[int, int, RationalComplex], ...] = ()

    @staticmethod
    def from_dict(mapping: Mapping[tuple[int, int], Scalar]) -> "CoeffPoly":
        acc = {
            key: RationalComplex.coerce(value) for key, value in mapping.items()
        }
        return CoeffPoly(_clean_terms(acc))

    @staticmethod
    def zero() -> "CoeffPoly":
        return CoeffPoly()

    @staticmethod
    def constant(value: Scalar) -> "CoeffPoly":
        return CoeffPoly.from_dict({(0, 0): value})

    @staticmethod
    def one() -> "CoeffPoly":
        return CoeffPoly.constant(1)

    @staticmethod
    def amplitude() -> "CoeffPoly":
        """The displacement amplitude itself, as a polynomial."""
        return CoeffPoly.from_dict({(1, 0): 1})

    @staticmethod
    def amplitude_conjugate() -> "CoeffPoly":
        return CoeffPoly.from_dict({(0, 1): 1})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def items(self) -> Iterator[tuple[tuple[int, int], RationalComplex]]:
        for p, q, c in self.terms:
            yield (p, q), c

    def as_dict(self) -> dict[tuple[int, int], RationalComplex]:
        return {(p, q): c for p, q, c in self.terms}

    def __add__(self, other: "CoeffPoly") -> "CoeffPoly":
        acc = self.as_dict()
        for key, c in other.items():
            acc[key] = acc.get(key, RC_ZERO) + c
        return CoeffPoly(_clean_terms(acc))

    def __sub__(self, other: "CoeffPoly") -> "CoeffPoly":
        return self + (-other)

    def __neg__(self) -> "CoeffPoly":
        return CoeffPoly(tuple((p, q, -c) for p, q, c in self.terms))

    def __mul__(self, other: "CoeffPoly") -> "CoeffPoly":
        acc: dict[tuple[int, int], RationalComplex] = {}
        for (p1, q1), c1 in self.items():
            for (p2, q2), c2 in other.items():
                key = (p1 + p2, q1 + q2)
                acc[key] = acc.get(key, RC_ZERO) + c1 * c2
        return CoeffPoly(_clean_terms(acc))

    def scaled(self, value: Scalar) -> "CoeffPoly":
        c = RationalComplex.coerce(value)
        if c.is_zero:
            return CoeffPoly()
        return CoeffPoly(tuple((p, q, coeff * c) for p, q, coeff in self.terms))

    def divided_by(self, value: Scalar) -> "CoeffPoly":
        c = RationalComplex.coerce(value)
        return CoeffPoly(tuple((p, q, coeff / c) for p, q, coeff in self.terms))

    def conjugated(self) -> "CoeffPoly":
        """Complex conjugate: swaps amplitude and conjugate powers."""
        acc = {(q, p): c.conjugate() for (p, q), c in self.items()}
        return CoeffPoly(_clean_terms(acc))

    def constant_value(self) -> RationalComplex | None:
        """The value if the polynomial is a c-number, else None."""
        if not self.terms:
            return RC_ZERO
        if len(self.terms) == 1 and self.terms[0][:2] == (0, 0):
            return self.terms[0][2]
        return None

    def evaluate(self, alpha: complex) -> complex:
        conj = alpha.conjugate() if isinstance(alpha, complex) else complex(alpha).conjugate()
        total = 0j
        for (p, q), c in self.items():
            total += complex(c) * alpha**p * conj**q
        return total

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (p, q), c in self.items():
            body = "".join(
                ["amp^%d" % p if p else "", "conj^%d" % q if q else ""]
            )
            parts.append(f"{c!r}{'*' + body if body else ''}")
        return " + ".join(parts)
