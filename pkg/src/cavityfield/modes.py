"""Cosine-mode decompositions of single-frequency expectation signals.

A real signal built from one oscillation frequency can be written as a sum
of cosine modes ``E_r * cos(omega*t - phi_r)`` plus an optional constant.
``ModeList`` records that decomposition together with the reconstruction
misfit, a degeneracy flag for collapsed phase lattices, and the lattice
phases whose fitted amplitude turned out to be structurally zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi


class NonRealSignalError(ValueError):
    """Raised when a signal expected to be real has imaginary content.

    ``residual`` is the maximum absolute imaginary part of the signal over
    one period.
    """

    def __init__(self, residual: float, message: str | None = None):
        self.residual = residual
        super().__init__(
            message
            or f"signal is not real: imaginary residual {residual:.3e}"
        )


def wrap_phase(phi: float) -> float:
    """Reduce a phase to [0, 2*pi)."""
    out = math.fmod(phi, TWO_PI)
    if out < 0.0:
        out += TWO_PI
    return 0.0 if out == TWO_PI else out


def phase_distance(a: float, b: float) -> float:
    """Distance between two phases on the circle."""
    d = abs(wrap_phase(a) - wrap_phase(b))
    return min(d, TWO_PI - d)


@dataclass(frozen=True)
class Mode:
    """One cosine component ``amplitude * cos(omega*t - phase)``."""

    amplitude: float
    phase: float


@dataclass(frozen=True)
class ModeList:
    """Cosine-mode decomposition of a real single-frequency signal.

    ``modes`` holds the nonzero components sorted by phase; signed
    amplitudes are allowed so printed closed forms survive round trips.
    A constant offset, when present, is kept separate because its phase is
    undefined.  ``residual`` is the RMS misfit of the reconstruction
    against the source signal.
    """

    modes: tuple[Mode, ...]
    constant: float | None = None
    residual: float = 0.0
    degenerate: bool = False
    structural_zeros: tuple[float, ...] = ()

    def reconstruct(self, omega: float, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        if self.constant is not None:
            out += self.constant
        for mode in self.modes:
            out += mode.amplitude * np.cos(omega * t - mode.phase)
        return out

    def amplitude_at(self, phase: float, tol: float = 1e-8) -> float:
        """Signed amplitude of the mode nearest ``phase``, 0.0 if absent."""
        for mode in self.modes:
            if phase_distance(mode.phase, phase) <= tol:
                return mode.amplitude
        return 0.0

    def to_json_obj(self) -> dict:
        return {
            "modes": [
                {"amplitude": m.amplitude, "phase": m.phase} for m in self.modes
            ],
            "constant": self.constant,
            "residual": self.residual,
            "degenerate": self.degenerate,
            "structural_zeros": list(self.structural_zeros),
        }


def merge_phase_clusters(
    entries: list[tuple[float, float]], tol: float = 1e-9
) -> list[tuple[float, float]]:
    """Sum amplitudes whose phases coincide within ``tol`` on the circle."""
    if not entries:
        return []
    entries = sorted(entries)
    merged: list[list[float]] = [[entries[0][0], entries[0][1]]]
    for phi, amp in entries[1:]:
        if phi - merged[-1][0] <= tol:
            merged[-1][1] += amp
        else:
            merged.append([phi, amp])
    # The seam: phases just below 2*pi belong with phase 0 clusters.
    if len(merged) > 1 and (TWO_PI - merged[-1][0]) + merged[0][0] <= tol:
        merged[0][1] += merged[-1][1]
        merged.pop()
    return [(phi, amp) for phi, amp in merged]
