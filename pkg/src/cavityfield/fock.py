"""Truncated Fock-space numerics: the dense-matrix oracle for the algebra.

Operators live on a finite ladder of dimension D.  Truncation shows up in
two places only: the commutator picks up a -(D-1) entry in its last
diagonal slot, and states leak probability past the cutoff, tracked as
``tail_mass``.  Everything is double precision and deterministic.

The propagator integrates ``i dpsi/dt = H(t) psi`` with a fixed-step
fourth-order Magnus scheme on two Gauss nodes.  Each step exponentiates an
anti-Hermitian generator, so the discrete flow is unitary to roundoff and
norm drift stays far below the monitored tolerance.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.linalg import expm

from .algebra import Convention, OperatorExpr
from .schedules import RampSchedule

DEFAULT_TAIL_TOL = 1e-10


class TruncationError(RuntimeError):
    """The Fock cutoff is too small for the requested state; increase dim."""


class NormDriftError(RuntimeError):
    """Propagation lost more norm than allowed; reduce the step size."""


@dataclass(frozen=True)
class FockSpace:
    """Fock ladder truncated to occupation numbers 0 .. dim-1."""

    dim: int

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError("Fock dimension must be at least 2")


def default_dim(alpha: complex, n_max: int = 0) -> int:
    """Cutoff rule keeping the truncated tail far below check tolerances."""
    return max(32, math.ceil((abs(alpha) + 4.0) ** 2) + n_max)


@dataclass(frozen=True, eq=False)
class FockOperator:
    space: FockSpace
    mat: np.ndarray

    def dagger(self) -> "FockOperator":
        return FockOperator(self.space, self.mat.conj().T)

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.mat - self.mat.conj().T)))

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return self.hermiticity_defect() <= tol

    def __matmul__(self, other):
        if isinstance(other, FockOperator):
            _check_space(self.space, other.space)
            return FockOperator(self.space, self.mat @ other.mat)
        if isinstance(other, Ket):
            _check_space(self.space, other.space)
            return Ket(other.space, self.mat @ other.amps, other.tail_mass)
        return NotImplemented

    def to_json_obj(self) -> list:
        return [[[v.real, v.imag] for v in row] for row in self.mat.tolist()]


@dataclass(frozen=True, eq=False)
class Ket:
    space: FockSpace
    amps: np.ndarray
    tail_mass: float = 0.0

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def inner(self, other: "Ket") -> complex:
        _check_space(self.space, other.space)
        return complex(np.vdot(self.amps, other.amps))

    def to_json_obj(self) -> list:
        return [[v.real, v.imag] for v in self.amps.tolist()]


def _check_space(a: FockSpace, b: FockSpace) -> None:
    if a.dim != b.dim:
        raise ValueError(f"Fock dimensions differ: {a.dim} vs {b.dim}")


@dataclass(frozen=True)
class PropagatorConfig:
    """Fixed-step integrator settings; defaults hold norm drift near roundoff."""

    steps_per_period: int = 256
    norm_tol: float = 1e-7


class HamiltonianPair(NamedTuple):
    h: FockOperator
    h_alpha: FockOperator
    h_alpha_is_hermitian: bool


# ---------------------------------------------------------------------------
# operators


def ladder_matrices(space: FockSpace) -> tuple[FockOperator, FockOperator]:
    """Annihilation and creation matrices on the truncated ladder."""
    a = np.diag(np.sqrt(np.arange(1, space.dim, dtype=float)), 1).astype(complex)
    return FockOperator(space, a), FockOperator(space, a.conj().T)


def displacement_matrix(alpha: complex, space: FockSpace) -> FockOperator:
    """Matrix exponential of the displacement generator.

    The generator is anti-Hermitian, so the result is unitary up to
    truncation; accuracy should be judged on the lower half of the ladder.
    """
    a, ad = ladder_matrices(space)
    gen = alpha * ad.mat - np.conjugate(alpha) * a.mat
    return FockOperator(space, expm(gen))


def unitarity_defect(op: FockOperator, columns: int | None = None) -> float:
    """Deviation of op^dagger op from the identity on the lowest columns."""
    d = op.space.dim
    cols = columns if columns is not None else d // 2
    product = op.mat.conj().T @ op.mat
    return float(np.max(np.abs(product[:cols, :cols] - np.eye(cols))))


def hamiltonians(
    omega: float,
    alpha: complex,
    space: FockSpace,
    convention: Convention,
) -> HamiltonianPair:
    """Oscillator Hamiltonian and its displaced counterpart.

    The displaced operator shifts the ladder by the amplitude under the
    chosen convention.  Under PAPER both shifts use the amplitude itself,
    so the result is Hermitian only for real displacement; the flag in the
    returned tuple records the outcome.
    """
    a, ad = ladder_matrices(space)
    eye = np.eye(space.dim, dtype=complex)
    h = FockOperator(space, omega * (ad.mat @ a.mat + 0.5 * eye))
    create_shift = alpha if convention is Convention.PAPER else np.conjugate(alpha)
    shifted_a = a.mat - alpha * eye
    shifted_ad = ad.mat - create_shift * eye
    h_alpha = FockOperator(space, omega * (shifted_ad @ shifted_a + 0.5 * eye))
    return HamiltonianPair(h, h_alpha, h_alpha.is_hermitian())


def matrix_of(
    x: OperatorExpr,
    space: FockSpace,
    t: float = 0.0,
    omega: float = 1.0,
    alpha: complex = 0j,
) -> FockOperator:
    """Dense matrix of a symbolic expression at one instant.

    Coefficient polynomials are evaluated at the numeric displacement;
    phase tags become ``e^{i k omega t}`` factors.
    """
    a, ad = ladder_matrices(space)
    powers_a: dict[int, np.ndarray] = {0: np.eye(space.dim, dtype=complex)}
    powers_ad: dict[int, np.ndarray] = {0: np.eye(space.dim, dtype=complex)}

    def pow_of(cache: dict[int, np.ndarray], base: np.ndarray, k: int) -> np.ndarray:
        while k not in cache:
            top = max(cache)
            cache[top + 1] = cache[top] @ base
        return cache[k]

    total = np.zeros((space.dim, space.dim), dtype=complex)
    for term in x.monomials:
        weight = term.coeff.evaluate(alpha) * cmath.exp(1j * term.k * omega * t)
        if weight == 0:
            continue
        total += weight * (
            pow_of(powers_ad, ad.mat, term.m) @ pow_of(powers_a, a.mat, term.n)
        )
    return FockOperator(space, total)


# ---------------------------------------------------------------------------
# states


def coherent_ket(
    alpha: complex, space: FockSpace, tail_tol: float = DEFAULT_TAIL_TOL
) -> Ket:
    """Coherent state from its analytic ladder amplitudes.

    Raises ``TruncationError`` when the probability beyond the cutoff
    exceeds ``tail_tol``; the remedy is a larger dimension.
    """
    amps = np.zeros(space.dim, dtype=complex)
    amps[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for k in range(1, space.dim):
        amps[k] = amps[k - 1] * alpha / math.sqrt(k)
    tail = max(0.0, 1.0 - float(np.sum(np.abs(amps) ** 2)))
    if tail > tail_tol:
        raise TruncationError(
            f"coherent state with |alpha|={abs(alpha):.3g} leaks {tail:.3e} "
            f"past dim={space.dim}; need at least dim={default_dim(alpha)}"
        )
    amps /= np.linalg.norm(amps)
    return Ket(space, amps, tail)


def number_ket(n: int, space: FockSpace) -> Ket:
    if not 0 <= n < space.dim:
        raise ValueError(f"occupation {n} outside the ladder of dim {space.dim}")
    amps = np.zeros(space.dim, dtype=complex)
    amps[n] = 1.0
    return Ket(space, amps, 0.0)


def displaced_number_ket(
    alpha: complex,
    n: int,
    space: FockSpace,
    tail_tol: float = DEFAULT_TAIL_TOL,
) -> Ket:
    """Displacement operator applied to the n-th number state."""
    if n >= space.dim // 2:
        raise ValueError(
            f"level {n} too close to the cutoff {space.dim}; need n < dim/2"
        )
    dmat = displacement_matrix(alpha, space)
    amps = dmat.mat[:, n].copy()
    tail = max(0.0, 1.0 - float(np.sum(np.abs(amps) ** 2)))
    if tail > tail_tol:
        raise TruncationError(
            f"displaced level {n} at |alpha|={abs(alpha):.3g} leaks {tail:.3e} "
            f"past dim={space.dim}; need at least dim={default_dim(alpha, n)}"
        )
    amps /= np.linalg.norm(amps)
    return Ket(space, amps, tail)


# ---------------------------------------------------------------------------
# functionals


def expectation(op: FockOperator, psi: Ket) -> complex:
    _check_space(op.space, psi.space)
    return complex(np.vdot(psi.amps, op.mat @ psi.amps))


def fidelity(x: Ket, y: Ket) -> float:
    """Global-phase-insensitive overlap magnitude, clamped into [0, 1]."""
    return min(1.0, abs(x.inner(y)))


# ---------------------------------------------------------------------------
# propagation

_GAUSS_OFFSETS = (0.5 - math.sqrt(3.0) / 6.0, 0.5 + math.sqrt(3.0) / 6.0)


def schrodinger_evolve(
    psi0: Ket,
    schedule: RampSchedule,
    omega: float,
    alpha0: complex,
    config: PropagatorConfig = PropagatorConfig(),
) -> Ket:
    """Propagate under the ramped displaced Hamiltonian.

    ``H(t)`` is the Hermitian (ADJOINT-convention) displaced oscillator at
    amplitude ``alpha0 * g(t)``.  The returned ket is not renormalized, so
    the caller can read off the (tiny) accumulated norm drift; a drift
    beyond ``config.norm_tol`` raises ``NormDriftError`` instead.
    """
    if omega <= 0.0:
        raise ValueError("omega must be positive")
    duration = schedule.duration
    if duration == 0.0:
        return Ket(psi0.space, psi0.amps.copy(), psi0.tail_mass)

    dim = psi0.space.dim
    a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(complex)
    ad = a.conj().T
    eye = np.eye(dim, dtype=complex)
    h_static = omega * (ad @ a + 0.5 * eye)

    def hamiltonian(t: float) -> np.ndarray:
        b = alpha0 * schedule.value(t)
        return (
            h_static
            - omega * (b * ad + np.conjugate(b) * a)
            + (omega * abs(b) ** 2) * eye
        )

    period = 2.0 * math.pi / omega
    steps = max(1, math.ceil(duration / period * config.steps_per_period))
    h = duration / steps
    c1, c2 = _GAUSS_OFFSETS
    sqrt3 = math.sqrt(3.0)

    psi = psi0.amps.copy()
    check_every = max(1, config.steps_per_period)

    if alpha0 == 0:
        # Static Hamiltonian: one eigenbasis serves every step.
        evals, evecs = np.linalg.eigh(h_static)
        coeffs = evecs.conj().T @ psi
        phase = np.exp(-1j * evals * h)
        for step in range(steps):
            coeffs = coeffs * phase
            if (step + 1) % check_every == 0:
                _check_drift(coeffs, config.norm_tol)
        psi = evecs @ coeffs
        _check_drift(psi, config.norm_tol)
        return Ket(psi0.space, psi, psi0.tail_mass)

    for step in range(steps):
        t = step * h
        h1 = hamiltonian(t + c1 * h)
        h2 = hamiltonian(t + c2 * h)
        # Fourth-order Magnus generator on two Gauss nodes; the commutator
        # term is what lifts the midpoint rule to order four.
        gen = (h / 2.0) * (h1 + h2) - 1j * (sqrt3 * h * h / 12.0) * (
            h2 @ h1 - h1 @ h2
        )
        evals, evecs = np.linalg.eigh(gen)
        psi = evecs @ (np.exp(-1j * evals) * (evecs.conj().T @ psi))
        if (step + 1) % check_every == 0:
            _check_drift(psi, config.norm_tol)
    _check_drift(psi, config.norm_tol)
    return Ket(psi0.space, psi, psi0.tail_mass)


def _check_drift(psi: np.ndarray, tol: float) -> None:
    drift = abs(1.0 - float(np.linalg.norm(psi)))
    if drift > tol:
        raise NormDriftError(
            f"norm drift {drift:.3e} exceeds {tol:.1e}; "
            "increase steps_per_period"
        )
