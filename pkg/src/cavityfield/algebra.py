"""Normal-ordered algebra of single-mode bosonic ladder operators.

Every expression is a finite sum of monomials

    coeff(amplitude, conjugate) * (create)^m * (annihilate)^n * e^{i k omega t}

with all creation operators on the left.  Products are reduced with the
single-mode commutation rule ``annihilate * create = create * annihilate + 1``
until that shape is reached; coefficients stay exact (see ``exact``).  The
integer ``k`` tags Heisenberg-picture phase factors so stationary-frame and
rotated-frame expressions share one canonical form.

Expectation values in coherent states, and in displaced number states built
by shifted-creation strings, come out as ``TimeScalar`` values: exact
polynomials in the displacement amplitude attached to phase indices ``k``.

All values are immutable; every operation is a pure function, safe to share
across workers.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Iterator, Mapping, Sequence, Union

import numpy as np

from .exact import CoeffPoly, RationalComplex, Scalar
from .modes import (
    Mode,
    ModeList,
    NonRealSignalError,
    merge_phase_clusters,
    wrap_phase,
)

#: Hard cap for displaced-state sandwich depth; term count grows factorially.
MAX_DISPLACED_LEVEL = 6


class Convention(enum.Enum):
    """How the displaced ladder operators shift by the amplitude.

    PAPER shifts both the annihilation and the creation operator by the
    amplitude itself (bra-side sandwich factors by the conjugate), so the
    shifted pair is not mutually adjoint.  ADJOINT shifts the creation
    operator by the conjugate instead, keeping the pair mutually adjoint;
    it is the variant the Hermitian dynamics and the oracle use.
    """

    PAPER = "paper"
    ADJOINT = "adjoint"


CoeffLike = Union[CoeffPoly, Scalar]


def _as_poly(value: CoeffLike) -> CoeffPoly:
    if isinstance(value, CoeffPoly):
        return value
    return CoeffPoly.constant(value)


@dataclass(frozen=True)
class NormalMonomial:
    """``coeff * (create)^m (annihilate)^n * e^{i k omega t}``."""

    m: int
    n: int
    k: int
    coeff: CoeffPoly

    @property
    def is_cnumber(self) -> bool:
        return self.m == 0 and self.n == 0


def _freeze(acc: Mapping[tuple[int, int, int], CoeffPoly]) -> tuple[NormalMonomial, ...]:
    return tuple(
        NormalMonomial(m, n, k, poly)
        for (m, n, k), poly in sorted(acc.items())
        if not poly.is_zero
    )


@dataclass(frozen=True)
class OperatorExpr:
    """Canonical normal-ordered operator polynomial.

    Monomials are sorted by ``(m, n, k)`` with like terms merged and zero
    coefficients dropped, so structural equality is semantic equality.
    """

    monomials: tuple[NormalMonomial, ...] = ()

    @staticmethod
    def from_map(mapping: Mapping[tuple[int, int, int], CoeffLike]) -> "OperatorExpr":
        acc = {key: _as_poly(value) for key, value in mapping.items()}
        return OperatorExpr(_freeze(acc))

    @staticmethod
    def zero() -> "OperatorExpr":
        return OperatorExpr()

    @property
    def is_zero(self) -> bool:
        return not self.monomials

    def as_dict(self) -> dict[tuple[int, int, int], CoeffPoly]:
        return {(t.m, t.n, t.k): t.coeff for t in self.monomials}

    def __add__(self, other: "OperatorExpr") -> "OperatorExpr":
        acc = self.as_dict()
        for term in other.monomials:
            key = (term.m, term.n, term.k)
            acc[key] = acc.get(key, CoeffPoly.zero()) + term.coeff
        return OperatorExpr(_freeze(acc))

    def __sub__(self, other: "OperatorExpr") -> "OperatorExpr":
        return self + other.scaled(-1)

    def __mul__(self, other: "OperatorExpr") -> "OperatorExpr":
        return multiply(self, other)

    def scaled(self, value: CoeffLike) -> "OperatorExpr":
        poly = _as_poly(value)
        acc = {
            (t.m, t.n, t.k): t.coeff * poly for t in self.monomials
        }
        return OperatorExpr(_freeze(acc))

    def __repr__(self) -> str:
        if not self.monomials:
            return "OperatorExpr(0)"
        parts = []
        for t in self.monomials:
            op = "".join(
                [
                    f"create^{t.m} " if t.m else "",
                    f"annihilate^{t.n} " if t.n else "",
                    f"e^({t.k}i.w.t)" if t.k else "",
                ]
            ).strip()
            parts.append(f"[{t.coeff!r}] {op}".strip())
        return "OperatorExpr(" + "  +  ".join(parts) + ")"


@dataclass(frozen=True)
class TimeScalar:
    """Exact scalar signal ``sum_k poly_k(amplitude) * e^{i k omega t}``."""

    terms: tuple[tuple[int, CoeffPoly], ...] = ()

    @staticmethod
    def from_map(mapping: Mapping[int, CoeffLike]) -> "TimeScalar":
        acc = {k: _as_poly(v) for k, v in mapping.items()}
        return TimeScalar(
            tuple((k, poly) for k, poly in sorted(acc.items()) if not poly.is_zero)
        )

    @staticmethod
    def zero() -> "TimeScalar":
        return TimeScalar()

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def items(self) -> Iterator[tuple[int, CoeffPoly]]:
        return iter(self.terms)

    def as_dict(self) -> dict[int, CoeffPoly]:
        return dict(self.terms)

    def get(self, k: int) -> CoeffPoly:
        for key, poly in self.terms:
            if key == k:
                return poly
        return CoeffPoly.zero()

    def __add__(self, other: "TimeScalar") -> "TimeScalar":
        acc = self.as_dict()
        for k, poly in other.items():
            acc[k] = acc.get(k, CoeffPoly.zero()) + poly
        return TimeScalar.from_map(acc)

    def __sub__(self, other: "TimeScalar") -> "TimeScalar":
        return self + other.scaled(-1)

    def scaled(self, value: CoeffLike) -> "TimeScalar":
        poly = _as_poly(value)
        return TimeScalar.from_map({k: p * poly for k, p in self.terms})

    def divided_by(self, value: Scalar) -> "TimeScalar":
        return TimeScalar.from_map(
            {k: p.divided_by(value) for k, p in self.terms}
        )

    def conjugated(self) -> "TimeScalar":
        return TimeScalar.from_map(
            {-k: p.conjugated() for k, p in self.terms}
        )

    def is_real_signal(self) -> bool:
        """Exact test: the term at -k must equal the conjugate of the +k term."""
        table = self.as_dict()
        for k, poly in table.items():
            partner = table.get(-k, CoeffPoly.zero())
            if partner != poly.conjugated():
                return False
        return True

    def evaluate(self, alpha: complex, omega: float, t) -> np.ndarray | complex:
        """Numeric value at displacement ``alpha``; ``t`` may be an array."""
        t_arr = np.asarray(t, dtype=float)
        total = np.zeros(t_arr.shape, dtype=complex)
        for k, poly in self.terms:
            total += poly.evaluate(alpha) * np.exp(1j * k * omega * t_arr)
        if np.ndim(t) == 0:
            return complex(total[()])
        return total

    def polar_buckets(
        self, alpha_mag: float, theta: float
    ) -> dict[int, dict[int, complex]]:
        """Substitute ``amplitude = alpha_mag * e^{i theta}``.

        Returns, per phase index ``k``, the numeric term values grouped by
        the conjugation grading ``d = p - q``; distinct ``d`` values carry
        distinct multiples of ``theta`` and are what separates a signal
        into several cosine modes of one frequency.
        """
        out: dict[int, dict[int, complex]] = {}
        for k, poly in self.terms:
            groups = out.setdefault(k, {})
            for (p, q), c in poly.items():
                d = p - q
                value = (
                    complex(c)
                    * alpha_mag ** (p + q)
                    * cmath.exp(1j * d * theta)
                )
                groups[d] = groups.get(d, 0j) + value
        return out

    def __repr__(self) -> str:
        if not self.terms:
            return "TimeScalar(0)"
        parts = [
            f"[{poly!r}] e^({k}i.w.t)" if k else f"[{poly!r}]"
            for k, poly in self.terms
        ]
        return "TimeScalar(" + "  +  ".join(parts) + ")"


# ---------------------------------------------------------------------------
# construction


_ATOM_KEYS = {
    "annihilate": (0, 1, 0),
    "create": (1, 0, 0),
    "identity": (0, 0, 0),
}


def atom(kind: str) -> OperatorExpr:
    """Single ladder operator or the identity, with unit coefficient."""
    try:
        key = _ATOM_KEYS[kind]
    except KeyError:
        raise ValueError(
            f"unknown atom kind {kind!r}; expected one of {sorted(_ATOM_KEYS)}"
        ) from None
    return OperatorExpr.from_map({key: 1})


def annihilation() -> OperatorExpr:
    return atom("annihilate")


def creation() -> OperatorExpr:
    return atom("create")


def identity() -> OperatorExpr:
    return atom("identity")


def combine(
    parts: Iterable[tuple[CoeffLike, OperatorExpr]]
) -> OperatorExpr:
    """Canonical linear combination ``sum_i c_i * x_i``."""
    acc: dict[tuple[int, int, int], CoeffPoly] = {}
    for coeff, expr in parts:
        poly = _as_poly(coeff)
        for term in expr.monomials:
            key = (term.m, term.n, term.k)
            acc[key] = acc.get(key, CoeffPoly.zero()) + term.coeff * poly
    return OperatorExpr(_freeze(acc))


# ---------------------------------------------------------------------------
# products and rewrites


def _normal_order_counts(n_left: int, m_right: int) -> Iterator[tuple[int, int]]:
    # annihilate^n create^m = sum_j j! C(n,j) C(m,j) create^(m-j) annihilate^(n-j),
    # the closed form of exhaustively applying the commutation rewrite.
    for j in range(min(n_left, m_right) + 1):
        yield j, factorial(j) * comb(n_left, j) * comb(m_right, j)


def multiply(x: OperatorExpr, y: OperatorExpr) -> OperatorExpr:
    """Normal-ordered product; phase indices add per factor pair."""
    acc: dict[tuple[int, int, int], CoeffPoly] = {}
    for tx in x.monomials:
        for ty in y.monomials:
            coeff = tx.coeff * ty.coeff
            k = tx.k + ty.k
            for j, count in _normal_order_counts(tx.n, ty.m):
                key = (tx.m + ty.m - j, tx.n + ty.n - j, k)
                scaled = coeff.scaled(count)
                acc[key] = acc.get(key, CoeffPoly.zero()) + scaled
    return OperatorExpr(_freeze(acc))


def power(x: OperatorExpr, exponent: int) -> OperatorExpr:
    if exponent < 0:
        raise ValueError("operator powers must be nonnegative")
    out = identity()
    for _ in range(exponent):
        out = multiply(out, x)
    return out


def adjoint(x: OperatorExpr) -> OperatorExpr:
    """Hermitian adjoint: conjugate coefficients, swap ladder powers, flip phases.

    The reversed word ``(create^m annihilate^n)^dagger = create^n annihilate^m``
    is already normal ordered, so no rewriting is needed.
    """
    acc: dict[tuple[int, int, int], CoeffPoly] = {}
    for t in x.monomials:
        key = (t.n, t.m, -t.k)
        acc[key] = acc.get(key, CoeffPoly.zero()) + t.coeff.conjugated()
    return OperatorExpr(_freeze(acc))


def displace_subst(x: OperatorExpr, convention: Convention) -> OperatorExpr:
    """Replace each ladder operator by its displaced counterpart.

    The annihilation operator always maps to ``annihilate - amplitude``.
    Under PAPER the creation operator also shifts by the amplitude; under
    ADJOINT it shifts by the conjugate so the substitution commutes with
    taking adjoints.
    """
    amp = CoeffPoly.amplitude()
    create_shift = (
        amp if convention is Convention.PAPER else CoeffPoly.amplitude_conjugate()
    )
    acc: dict[tuple[int, int, int], CoeffPoly] = {}
    for t in x.monomials:
        # (create - s)^m (annihilate - a)^n expands without commutators:
        # the scalar shifts commute with everything.
        for i in range(t.m + 1):
            for j in range(t.n + 1):
                coeff = t.coeff.scaled(comb(t.m, i) * comb(t.n, j))
                if t.m - i:
                    coeff = coeff * _poly_power(create_shift.scaled(-1), t.m - i)
                if t.n - j:
                    coeff = coeff * _poly_power(amp.scaled(-1), t.n - j)
                key = (i, j, t.k)
                acc[key] = acc.get(key, CoeffPoly.zero()) + coeff
    return OperatorExpr(_freeze(acc))


def _poly_power(poly: CoeffPoly, exponent: int) -> CoeffPoly:
    out = CoeffPoly.one()
    for _ in range(exponent):
        out = out * poly
    return out


def evolve_phases(x: OperatorExpr) -> OperatorExpr:
    """Attach Heisenberg phases: ``(m, n, 0)`` becomes ``(m, n, m - n)``.

    Rejects expressions that already carry phase tags; applying the
    evolution twice would silently double every phase.
    """
    for t in x.monomials:
        if t.k != 0:
            raise ValueError(
                "expression already carries phase factors; "
                "phase evolution applies to stationary-frame input only"
            )
    acc = {(t.m, t.n, t.m - t.n): t.coeff for t in x.monomials}
    return OperatorExpr(_freeze(acc))


# ---------------------------------------------------------------------------
# expectation functionals


def coherent_expectation(x: OperatorExpr) -> TimeScalar:
    """Expectation in the coherent state of the displacement amplitude.

    A normal-ordered monomial ``create^m annihilate^n`` contributes the
    conjugate amplitude to the m-th power times the amplitude to the n-th,
    exactly; each monomial lands in its phase bucket ``k``.
    """
    acc: dict[int, CoeffPoly] = {}
    for t in x.monomials:
        value = t.coeff * CoeffPoly.from_dict({(t.n, t.m): 1})
        acc[t.k] = acc.get(t.k, CoeffPoly.zero()) + value
    return TimeScalar.from_map(acc)


def _shifted_annihilation(convention: Convention, bra_side: bool) -> OperatorExpr:
    # PAPER uses the conjugate shift for bra-side factors only; every other
    # combination shifts by the amplitude itself.
    if convention is Convention.PAPER and bra_side:
        shift = CoeffPoly.amplitude_conjugate()
    else:
        shift = CoeffPoly.amplitude()
    return OperatorExpr.from_map({(0, 1, 0): 1, (0, 0, 0): shift.scaled(-1)})


def _shifted_creation(convention: Convention) -> OperatorExpr:
    shift = (
        CoeffPoly.amplitude()
        if convention is Convention.PAPER
        else CoeffPoly.amplitude_conjugate()
    )
    return OperatorExpr.from_map({(1, 0, 0): 1, (0, 0, 0): shift.scaled(-1)})


def displaced_state_expectation(
    x: OperatorExpr,
    n: int,
    convention: Convention,
    normalize: bool = False,
    *,
    max_level: int = MAX_DISPLACED_LEVEL,
) -> TimeScalar:
    """Expectation of ``x`` in the n-th displaced excited state.

    The state is built constructively as n shifted creation operators acting
    on the coherent state, and the matching shifted annihilation string acts
    on the bra.  With ``normalize=False`` the sandwich is divided by n!
    only (the factor implied by the state construction); with
    ``normalize=True`` it is divided by the exact symbolic norm of the
    state, which must reduce to a c-number.

    Under ADJOINT the norm is exactly n!, so both variants agree there.
    Under PAPER the norm is a genuine polynomial in the amplitude for
    n >= 1 and exact division is not closed; ``normalize=True`` then raises.
    """
    if n < 0:
        raise ValueError("state level must be nonnegative")
    if n > max_level:
        raise ValueError(
            f"state level {n} exceeds the configured maximum {max_level}; "
            "sandwich term count grows factorially"
        )
    bra = power(_shifted_annihilation(convention, bra_side=True), n)
    ket = power(_shifted_creation(convention), n)
    sandwich = coherent_expectation(multiply(bra, multiply(x, ket)))
    if not normalize:
        return sandwich.divided_by(Fraction(factorial(n)))
    norm = coherent_expectation(multiply(bra, ket))
    constant = norm.get(0).constant_value()
    if constant is None or len(norm.terms) > 1:
        raise ValueError(
            "state norm is not a c-number under this convention; "
            "exact normalized division is only defined when it is"
        )
    if constant.is_zero:
        raise ZeroDivisionError("displaced state has zero norm")
    return sandwich.divided_by(constant)


# ---------------------------------------------------------------------------
# real-mode extraction


def imag_residual(signal: TimeScalar, alpha_mag: float, theta: float) -> float:
    """Peak imaginary part of the signal over one period, after substitution.

    Exact for signals confined to phase indices -1, 0, +1: the imaginary
    part is a constant plus one sinusoid, whose peak is the sum of their
    magnitudes.
    """
    buckets = signal.polar_buckets(alpha_mag, theta)
    if any(abs(k) > 1 for k in buckets):
        raise ValueError(
            "imaginary-residual bound implemented for single-harmonic signals only"
        )
    b_plus = sum(buckets.get(1, {}).values(), 0j)
    b_minus = sum(buckets.get(-1, {}).values(), 0j)
    b_zero = sum(buckets.get(0, {}).values(), 0j)
    return abs(b_zero.imag) + abs(b_plus - b_minus.conjugate())


def to_real_modes(
    signal: TimeScalar,
    alpha_mag: float,
    theta: float,
    *,
    reality_tol: float = 1e-12,
) -> ModeList:
    """Decompose a real single-frequency signal into cosine modes.

    Substitutes the polar amplitude, pairs the ``e^{+-i omega t}`` buckets,
    and emits one mode per conjugation grading ``d``: gradings whose
    residual factor is real sit at the lattice phase ``-d * theta`` with a
    signed amplitude; anything else falls back to a positive amplitude at
    its natural phase.  Coinciding phases merge (the ``theta = 0``
    degeneracy), and a phase-free bucket becomes the constant component.

    Raises ``NonRealSignalError`` when the substituted signal has an
    imaginary part beyond ``reality_tol`` (relative to the signal scale).
    """
    buckets = signal.polar_buckets(alpha_mag, theta)
    if any(abs(k) > 1 for k in buckets):
        raise ValueError(
            "mode extraction handles signals with phase indices -1, 0, +1 only"
        )
    plus = buckets.get(1, {})
    minus = buckets.get(-1, {})
    b_plus = sum(plus.values(), 0j)
    b_minus = sum(minus.values(), 0j)
    b_zero = sum(buckets.get(0, {}).values(), 0j)
    scale = max(1.0, abs(b_plus), abs(b_minus), abs(b_zero))
    residual_imag = abs(b_zero.imag) + abs(b_plus - b_minus.conjugate())
    if residual_imag > reality_tol * scale:
        raise NonRealSignalError(residual_imag)

    drop_tol = 1e-12 * scale
    entries: list[tuple[float, float]] = []
    for d in sorted(set(plus) | {-d for d in minus}):
        c = (plus.get(d, 0j) + minus.get(-d, 0j).conjugate()) / 2.0
        if abs(c) <= drop_tol:
            continue
        rho = c * cmath.exp(-1j * d * theta)
        if abs(rho.imag) <= 1e-12 * max(1.0, abs(rho)):
            entries.append((wrap_phase(-d * theta), 2.0 * rho.real))
        else:
            entries.append((wrap_phase(-cmath.phase(c)), 2.0 * abs(c)))
    merged = merge_phase_clusters(entries)
    modes = tuple(
        Mode(amplitude=amp, phase=phi)
        for phi, amp in merged
        if abs(amp) > drop_tol
    )
    constant = b_zero.real if abs(b_zero) > drop_tol else None

    # Reconstruction misfit over one period (phase variable x = omega * t).
    x = np.linspace(0.0, 2.0 * math.pi, 256, endpoint=False)
    source = (
        b_plus * np.exp(1j * x) + b_minus * np.exp(-1j * x) + b_zero
    ).real
    rebuilt = np.zeros_like(x)
    if constant is not None:
        rebuilt += constant
    for mode in modes:
        rebuilt += mode.amplitude * np.cos(x - mode.phase)
    residual = float(np.sqrt(np.mean((source - rebuilt) ** 2)))
    return ModeList(modes=modes, constant=constant, residual=residual)


# ---------------------------------------------------------------------------
# ordered squares (for intensity floors)


def normal_ordered_square(x: OperatorExpr) -> OperatorExpr:
    """Square of an expression with factors reordered and no commutator terms.

    This is the ordered-product square: ladder powers and phase indices add
    pairwise as if the mode operators commuted.  It matches the usual
    ordered-square symbol for expressions linear in the ladder operators,
    which is all the field models need.
    """
    acc: dict[tuple[int, int, int], CoeffPoly] = {}
    for t1 in x.monomials:
        for t2 in x.monomials:
            key = (t1.m + t2.m, t1.n + t2.n, t1.k + t2.k)
            acc[key] = acc.get(key, CoeffPoly.zero()) + t1.coeff * t2.coeff
    return OperatorExpr(_freeze(acc))


# ---------------------------------------------------------------------------
# canonical JSON serialization


def _coeff_to_json(poly: CoeffPoly) -> list[list[int]]:
    return [
        [
            p,
            q,
            c.re.numerator,
            c.re.denominator,
            c.im.numerator,
            c.im.denominator,
        ]
        for (p, q), c in poly.items()
    ]


def _coeff_from_json(rows: Sequence[Sequence[int]]) -> CoeffPoly:
    return CoeffPoly.from_dict(
        {
            (int(p), int(q)): RationalComplex(
                Fraction(int(rn), int(rd)), Fraction(int(im), int(idn))
            )
            for p, q, rn, rd, im, idn in rows
        }
    )


def operator_expr_to_json(x: OperatorExpr) -> list[dict]:
    """Canonical JSON form: one row per monomial, coefficients as integer
    fraction sextuples sorted by exponent pair."""
    return [
        {"m": t.m, "n": t.n, "k": t.k, "coeff": _coeff_to_json(t.coeff)}
        for t in x.monomials
    ]


def operator_expr_from_json(rows: Sequence[Mapping]) -> OperatorExpr:
    acc: dict[tuple[int, int, int], CoeffPoly] = {}
    for row in rows:
        key = (int(row["m"]), int(row["n"]), int(row["k"]))
        acc[key] = acc.get(key, CoeffPoly.zero()) + _coeff_from_json(row["coeff"])
    return OperatorExpr(_freeze(acc))


def time_scalar_to_json(s: TimeScalar) -> list[dict]:
    """Same canonical row schema as operator expressions, with no ladder powers."""
    return [
        {"m": 0, "n": 0, "k": k, "coeff": _coeff_to_json(poly)}
        for k, poly in s.items()
    ]


def time_scalar_from_json(rows: Sequence[Mapping]) -> TimeScalar:
    acc: dict[int, CoeffPoly] = {}
    for row in rows:
        k = int(row["k"])
        acc[k] = acc.get(k, CoeffPoly.zero()) + _coeff_from_json(row["coeff"])
    return TimeScalar.from_map(acc)
