"""Figure renderers for CLI outputs.

Every command that writes a data file can drop a companion PNG next to it;
these helpers keep the figures deterministic (fixed size, no timestamps)
so repeated runs of one scenario produce identical images.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .field import FieldSeries, Report
from .modes import ModeList
from .schedules import RampSchedule
from .transition import IntensityProfile, TransitionResult

_FIGSIZE = (6.4, 4.0)


def _finish(fig, path: str) -> None:
    fig.savefig(path, dpi=110, bbox_inches="tight")
    plt.close(fig)


def save_report_figure(report: Report, path: str) -> None:
    """Horizontal pass/fail strip, one bar per check."""
    ids = [row.id for row in report.checks]
    colors = ["#2a7e43" if row.passed else "#b03a2e" for row in report.checks]
    height = max(2.5, 0.28 * len(ids))
    fig, ax = plt.subplots(figsize=(7.5, height))
    ax.barh(range(len(ids)), [1.0] * len(ids), color=colors, edgecolor="none")
    ax.set_yticks(range(len(ids)))
    ax.set_yticklabels(ids, fontsize=7)
    ax.invert_yaxis()
    ax.set_xticks([])
    ax.set_xlim(0, 1)
    passed = sum(row.passed for row in report.checks)
    ax.set_title(f"verification battery: {passed}/{len(ids)} checks pass")
    _finish(fig, path)


def save_series_figure(series: FieldSeries, path: str) -> None:
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    ax.plot(series.t, series.values.real, label="Re", lw=1.2)
    if np.max(np.abs(series.values.imag)) > 1e-12:
        ax.plot(series.t, series.values.imag, label="Im", lw=1.2, ls="--")
    ax.set_xlabel("t")
    ax.set_ylabel("field expectation")
    ax.legend(loc="best", fontsize=8)
    ax.grid(alpha=0.3)
    _finish(fig, path)


def save_modes_figure(mode_list: ModeList, path: str) -> None:
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    phases = [m.phase for m in mode_list.modes]
    amps = [m.amplitude for m in mode_list.modes]
    if phases:
        markers, stems, base = ax.stem(phases, amps)
        plt.setp(stems, lw=1.2)
        plt.setp(base, color="gray", lw=0.8)
    for phi in mode_list.structural_zeros:
        ax.axvline(phi, color="lightgray", ls=":", lw=0.8)
    if mode_list.constant is not None:
        ax.axhline(mode_list.constant, color="tab:orange", ls="--", lw=1.0,
                   label="constant")
        ax.legend(fontsize=8)
    ax.set_xlabel("phase offset (rad)")
    ax.set_ylabel("amplitude")
    ax.set_title(
        f"{len(phases)} modes, residual {mode_list.residual:.2e}"
        + (", degenerate" if mode_list.degenerate else "")
    )
    ax.grid(alpha=0.3)
    _finish(fig, path)


def save_transition_figure(
    result: TransitionResult, schedule: RampSchedule, path: str
) -> None:
    fig, (ax1, ax2) = plt.subplots(
        1, 2, figsize=(8.0, 3.2), gridspec_kw={"width_ratios": [2, 1]}
    )
    if schedule.duration > 0:
        tt = np.linspace(0.0, schedule.duration, 200)
        ax1.plot(tt, [schedule.value(t) for t in tt], lw=1.4)
    else:
        ax1.step([0, 1], [1, 0], where="post", lw=1.4)
    ax1.set_xlabel("t")
    ax1.set_ylabel("ramp g(t)")
    ax1.set_title(f"{schedule.kind}, T = {schedule.duration:g}")
    ax1.grid(alpha=0.3)
    labels = ["to displaced", "to number"]
    values = [result.fidelity_to_displaced, result.fidelity_to_number]
    ax2.bar(labels, values, color=["#4878a8", "#8a5fa8"])
    ax2.set_ylim(0, 1.05)
    ax2.set_ylabel("fidelity")
    for i, v in enumerate(values):
        ax2.text(i, v + 0.02, f"{v:.4f}", ha="center", fontsize=8)
    fig.tight_layout()
    _finish(fig, path)


def save_double_slit_figure(profile: IntensityProfile, path: str) -> None:
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    ax.plot(profile.x, profile.intensity, lw=1.3, label="intensity")
    ax.plot(profile.x, profile.fringe_term, lw=0.9, ls="--", label="fringe term")
    ax.axhline(profile.floor, color="gray", lw=0.9, ls=":", label="floor")
    ax.set_xlabel("screen position")
    ax.set_ylabel("intensity")
    ax.set_title(f"visibility = {profile.visibility:.4f}")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    _finish(fig, path)
