"""Time profiles for ramping the displacement amplitude to zero.

A schedule scales the displacement during a Hamiltonian transition: it
starts at 1, ends at 0 after ``duration`` (in the same time units as
1/omega).  ``sudden`` is the zero-duration limit where the state is simply
reinterpreted under the final Hamiltonian without any evolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

RAMP_KINDS = ("sudden", "linear", "smooth_cosine")


@dataclass(frozen=True)
class RampSchedule:
    """Ramp profile g with g(0) = 1 and g(duration) = 0."""

    kind: str
    duration: float = 0.0

    def __post_init__(self):
        if self.kind not in RAMP_KINDS:
            raise ValueError(
                f"unknown ramp kind {self.kind!r}; expected one of {RAMP_KINDS}"
            )
        if self.kind == "sudden":
            if self.duration != 0.0:
                raise ValueError("a sudden ramp has zero duration by definition")
        elif self.duration <= 0.0:
            raise ValueError("ramp duration must be positive")

    def value(self, t: float) -> float:
        if t <= 0.0:
            return 1.0
        if t >= self.duration:
            return 0.0
        x = t / self.duration
        if self.kind == "linear":
            return 1.0 - x
        # smooth_cosine: continuously differentiable at both endpoints.
        return 0.5 * (1.0 + math.cos(math.pi * x))

    def to_json_obj(self) -> dict:
        return {"kind": self.kind, "duration": self.duration}

    @staticmethod
    def from_json_obj(obj: dict) -> "RampSchedule":
        return RampSchedule(kind=obj["kind"], duration=float(obj["duration"]))
