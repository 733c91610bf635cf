"""Ramped Hamiltonian transitions and the two-slit intensity model.

``run_transition`` prepares a displaced number state, ramps the
displacement to zero on a schedule, and reports overlaps with both the
initial displaced state and the bare number state: the instantaneous limit
keeps the displaced family, the slow limit lands on the number state.

``double_slit_pattern`` turns mean-field signals into a screen intensity:
a fringe term from the summed path amplitudes plus an incoherent floor
from the per-slit normally-ordered field variance, so states with zero
mean field still light the screen, just without fringes.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .algebra import normal_ordered_square
from .field import (
    FieldConfig,
    FieldSeries,
    State,
    electric_field_expr,
    expectation_series,
    make_time_grid,
)
from .fock import (
    FockSpace,
    PropagatorConfig,
    default_dim,
    displaced_number_ket,
    fidelity,
    number_ket,
    schrodinger_evolve,
)
from .schedules import RampSchedule

FAR_FIELD_MIN_RATIO = 100.0


@dataclass(frozen=True)
class TransitionResult:
    """Outcome of one ramp run."""

    fidelity_to_displaced: float
    fidelity_to_number: float
    norm_drift: float
    schedule: RampSchedule
    alpha0: complex
    n: int

    def to_json_obj(self) -> dict:
        return {
            "fidelity_to_displaced": self.fidelity_to_displaced,
            "fidelity_to_number": self.fidelity_to_number,
            "norm_drift": self.norm_drift,
            "schedule": self.schedule.to_json_obj(),
            "alpha0": [self.alpha0.real, self.alpha0.imag],
            "n": self.n,
        }


def run_transition(
    alpha0: complex,
    n: int,
    schedule: RampSchedule,
    space: FockSpace | None = None,
    config: PropagatorConfig | None = None,
    *,
    omega: float = 1.0,
) -> TransitionResult:
    """Evolve a displaced number state while the displacement ramps to zero.

    Evolution uses the Hermitian (self-adjoint convention) displaced
    Hamiltonian family; a sudden schedule skips evolution entirely, which
    is the reinterpretation limit.
    """
    space = space or FockSpace(default_dim(alpha0, n + 2))
    config = config or PropagatorConfig()
    psi0 = displaced_number_ket(alpha0, n, space)
    final = schrodinger_evolve(psi0, schedule, omega, alpha0, config)
    return TransitionResult(
        fidelity_to_displaced=fidelity(final, psi0),
        fidelity_to_number=fidelity(final, number_ket(n, space)),
        norm_drift=abs(1.0 - final.norm()),
        schedule=schedule,
        alpha0=complex(alpha0),
        n=n,
    )


# ---------------------------------------------------------------------------
# two-slit model


@dataclass(frozen=True)
class SlitGeometry:
    """Two slits a distance apart, a screen far behind them.

    ``x`` holds the screen sample points.  The small-angle path difference
    at screen position x is ``separation * x / distance``, expressed below
    as a phase through the wavelength.
    """

    separation: float
    distance: float
    x: np.ndarray

    def __post_init__(self):
        if self.separation < 0.0 or self.distance <= 0.0:
            raise ValueError("separation must be >= 0 and distance > 0")
        x = np.asarray(self.x, dtype=float)
        if x.ndim != 1 or x.size < 2:
            raise ValueError("need a one-dimensional screen grid")
        object.__setattr__(self, "x", x)
        ratio = math.inf if self.separation == 0 else self.distance / self.separation
        if ratio < FAR_FIELD_MIN_RATIO:
            warnings.warn(
                f"far-field ratio distance/separation = {ratio:.1f} < "
                f"{FAR_FIELD_MIN_RATIO:.0f}; small-angle phases are inaccurate",
                stacklevel=2,
            )

    @staticmethod
    def default(cfg: FieldConfig, points: int = 601) -> "SlitGeometry":
        """Separation of 5 wavelengths, screen at 1000, spanning 3 fringes."""
        lam = cfg.wavelength
        separation = 5.0 * lam
        distance = 1000.0 * lam
        fringe = lam * distance / separation
        half = 1.5 * fringe
        return SlitGeometry(
            separation=separation,
            distance=distance,
            x=np.linspace(-half, half, points),
        )


@dataclass(frozen=True, eq=False)
class IntensityProfile:
    x: np.ndarray
    intensity: np.ndarray
    fringe_term: np.ndarray
    floor: float
    visibility: float

    def to_json_obj(self) -> dict:
        return {
            "x": self.x.tolist(),
            "intensity": self.intensity.tolist(),
            "fringe_term": self.fringe_term.tolist(),
            "floor": self.floor,
            "visibility": self.visibility,
        }


def _harmonic_coefficients(series: FieldSeries) -> tuple[complex, complex, complex]:
    """Constant and e^{+-i omega t} coefficients of a single-mode series.

    Exact for band-limited signals sampled over integer periods, which is
    all the field expectations here produce.
    """
    phases = np.exp(-1j * series.omega * series.t)
    b_plus = np.mean(series.values * phases)
    b_minus = np.mean(series.values * np.conj(phases))
    b_zero = np.mean(series.values)
    return complex(b_zero), complex(b_plus), complex(b_minus)


def double_slit_pattern(
    state: State,
    geom: SlitGeometry,
    cfg: FieldConfig,
    *,
    space: FockSpace | None = None,
    samples_per_period: int = 256,
) -> IntensityProfile:
    """Screen intensity for two identical slits radiating the same state.

    The fringe term at screen point x is the time average of the squared
    sum of the two path mean fields, the second delayed by the path phase
    difference.  The floor is the sum of the two per-slit time-averaged
    normally-ordered field variances, computed through the Fock oracle, so
    coherent states contribute none and number states a flat pedestal.
    Visibility is (max - min) / (max + min) of the total intensity.
    """
    level = getattr(state, "n", 0)
    state_alpha = getattr(state, "alpha", 0j)
    fock_space = space or FockSpace(default_dim(state_alpha, level + 2))
    grid = make_time_grid(cfg.omega, periods=1, samples_per_period=samples_per_period)

    e_expr = electric_field_expr(cfg)
    mean_series = expectation_series(
        e_expr, state, cfg, grid, path="oracle", space=fock_space
    )
    b_zero, b_plus, _ = _harmonic_coefficients(mean_series)

    # Path phase difference per screen point, small-angle far field.
    delta = (
        2.0 * math.pi * geom.separation * geom.x / (cfg.wavelength * geom.distance)
    )
    # Time average of (s(t) + s(t - delta/omega))^2 for a real single-mode
    # signal s with harmonic coefficients (b_zero, b_plus): the delayed copy
    # scales b_plus by e^{-i delta}.
    sum_zero = 2.0 * b_zero.real
    sum_plus_mag2 = (np.abs(1.0 + np.exp(-1j * delta)) ** 2) * abs(b_plus) ** 2
    fringe = sum_zero**2 + 2.0 * sum_plus_mag2

    # Per-slit incoherent floor from the normally ordered square.
    square_expr = normal_ordered_square(e_expr)
    square_series = expectation_series(
        square_expr, state, cfg, grid, path="oracle", space=fock_space
    )
    mean_square_avg = float(np.mean(square_series.values).real)
    mean_sq = b_zero.real**2 + 2.0 * abs(b_plus) ** 2
    floor_per_slit = mean_square_avg - mean_sq
    floor = 2.0 * floor_per_slit

    intensity = fringe + floor
    top = float(np.max(intensity))
    bottom = float(np.min(intensity))
    visibility = 0.0 if top + bottom == 0.0 else (top - bottom) / (top + bottom)
    # Oracle roundoff can push the floor a few ulp negative; the ratio is
    # still a visibility and stays in [0, 1].
    visibility = min(1.0, max(0.0, visibility))
    return IntensityProfile(
        x=geom.x.copy(),
        intensity=np.asarray(intensity, dtype=float),
        fringe_term=np.asarray(fringe, dtype=float),
        floor=floor,
        visibility=float(visibility),
    )
