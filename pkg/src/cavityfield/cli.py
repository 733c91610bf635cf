"""Command-line entry point.

Commands: ``verify`` (the equation battery), ``series`` (field expectation
samples), ``modes`` (lattice cosine-mode decomposition), ``transition``
(ramped Hamiltonian run), ``double-slit`` (screen intensity).  Every run
resolves its parameters into an effective scenario that is echoed into the
output, so any output can be reproduced byte for byte by feeding the
echoed scenario back through ``--scenario``.

Outputs are written atomically (temp file, then rename).  Unless disabled
with ``--no-plot``, a file-writing run also renders a companion PNG figure
next to the data file.

Exit codes: 0 success, 1 when ``verify`` has failing rows, 2 invalid
input, 3 numerical failure (truncation or norm drift).
"""

from __future__ import annotations

import argparse
import cmath
import csv
import io
import json
import math
import os
import sys
import tempfile

import numpy as np

from .algebra import (
    Convention,
    displaced_state_expectation,
    operator_expr_to_json,
    time_scalar_to_json,
)
from .field import (
    CoherentState,
    DisplacedState,
    FieldConfig,
    NumberState,
    decompose_modes,
    electric_field_expr,
    expectation_series,
    magnetic_field_expr,
    make_time_grid,
    perturbed_field_expr,
    verify_report,
)
from .fock import (
    FockSpace,
    NormDriftError,
    PropagatorConfig,
    TruncationError,
    default_dim,
)
from .modes import NonRealSignalError
from .schedules import RampSchedule
from .transition import SlitGeometry, double_slit_pattern, run_transition

OUT_DIR_ENV = "CAVITYFIELD_OUT_DIR"

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_BAD_INPUT = 2
EXIT_NUMERICAL = 3

_DEFAULTS: dict = {
    "alpha": [0.8, 0.0],
    "alpha_mag": None,
    "theta": None,
    "theta_from_alpha": False,
    "n": 1,
    "nmax": 3,
    "dim": None,
    "omega": 1.0,
    "eps_tilde": 1.0,
    "z": None,
    "c": 1.0,
    "convention": "paper",
    "normalize": False,
    "state": "coherent",
    "field": "electric",
    "path": "auto",
    "periods": 1,
    "samples_per_period": 256,
    "ramp": "smooth-cosine",
    "duration": 200.0,
    "steps_per_period": 256,
    "slit_separation": None,
    "screen_distance": None,
    "screen_points": 601,
    "emit": "values",
    "out": None,
    "format": None,
    "plot": True,
}

_FORMAT_DEFAULT = {
    "verify": "json",
    "series": "csv",
    "modes": "json",
    "transition": "json",
    "double-slit": "csv",
}


def _parse_complex(text: str) -> list[float]:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return [float(parts[0]), 0.0]
        if len(parts) == 2:
            return [float(parts[0]), float(parts[1])]
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(
        f"expected a complex number as 're,im', got {text!r}"
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cavityfield",
        description="Displaced single-mode cavity field toolkit.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--scenario", help="JSON scenario file with defaults")
        p.add_argument("--alpha", type=_parse_complex, help="displacement 're,im'")
        p.add_argument("--omega", type=float, help="mode angular frequency")
        p.add_argument("--eps-tilde", dest="eps_tilde", type=float,
                       help="field prefactor")
        p.add_argument("--z", type=float, help="observation point")
        p.add_argument("--c", type=float, help="wave speed")
        p.add_argument("--dim", type=int, help="Fock cutoff dimension")
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--format", choices=["csv", "json"], help="output format")
        p.add_argument("--plot", action=argparse.BooleanOptionalAction,
                       default=None, help="render a companion PNG figure")

    p_verify = sub.add_parser("verify", help="run the verification battery")
    common(p_verify)
    p_verify.add_argument("--nmax", type=int, help="highest displaced level")
    p_verify.add_argument("--theta", type=float, help="lattice angle")
    p_verify.add_argument("--theta-from-alpha", dest="theta_from_alpha",
                          action=argparse.BooleanOptionalAction, default=None,
                          help="derive the lattice angle from alpha's phase")

    p_series = sub.add_parser("series", help="sample a field expectation")
    common(p_series)
    p_series.add_argument("--state", choices=["coherent", "number", "displaced"])
    p_series.add_argument("--n", type=int, help="number / displaced level")
    p_series.add_argument("--convention", choices=["paper", "adjoint"])
    p_series.add_argument("--normalize", action=argparse.BooleanOptionalAction,
                          default=None)
    p_series.add_argument("--field", choices=["electric", "magnetic", "perturbed"])
    p_series.add_argument("--path", choices=["auto", "symbolic", "oracle"])
    p_series.add_argument("--periods", type=int)
    p_series.add_argument("--samples-per-period", dest="samples_per_period",
                          type=int)
    p_series.add_argument("--emit", choices=["values", "expr"],
                          help="emit sampled values or the symbolic expression")

    p_modes = sub.add_parser("modes", help="lattice mode decomposition")
    common(p_modes)
    p_modes.add_argument("--n", type=int, help="displaced level")
    p_modes.add_argument("--convention", choices=["paper", "adjoint"])
    p_modes.add_argument("--normalize", action=argparse.BooleanOptionalAction,
                         default=None)
    p_modes.add_argument("--field", choices=["electric", "magnetic", "perturbed"])
    p_modes.add_argument("--alpha-mag", dest="alpha_mag", type=float,
                         help="displacement magnitude for the substitution")
    p_modes.add_argument("--theta", type=float, help="displacement phase angle")
    p_modes.add_argument("--emit", choices=["values", "expr"])

    p_trans = sub.add_parser("transition", help="ramped Hamiltonian run")
    common(p_trans)
    p_trans.add_argument("--n", type=int, help="displaced level")
    p_trans.add_argument("--ramp", choices=["sudden", "linear", "smooth-cosine"])
    p_trans.add_argument("--duration", type=float,
                         help="ramp duration (units of 1/omega)")
    p_trans.add_argument("--steps-per-period", dest="steps_per_period", type=int)

    p_slit = sub.add_parser("double-slit", help="two-slit screen intensity")
    common(p_slit)
    p_slit.add_argument("--state", choices=["coherent", "number"])
    p_slit.add_argument("--n", type=int, help="number state level")
    p_slit.add_argument("--slit-separation", dest="slit_separation", type=float)
    p_slit.add_argument("--screen-distance", dest="screen_distance", type=float)
    p_slit.add_argument("--screen-points", dest="screen_points", type=int)

    return parser


def _merge_scenario(args: argparse.Namespace) -> dict:
    """Effective scenario: built-in defaults, then file values, then flags."""
    scenario = dict(_DEFAULTS)
    if args.scenario:
        with open(args.scenario, "r", encoding="utf-8") as fh:
            loaded = json.load(fh)
        file_command = loaded.pop("command", None)
        if file_command is not None and file_command != args.command:
            raise ValueError(
                f"scenario file is for command {file_command!r}, "
                f"not {args.command!r}"
            )
        unknown = set(loaded) - set(scenario)
        if unknown:
            raise ValueError(f"unknown scenario keys: {sorted(unknown)}")
        scenario.update(loaded)
    for key in scenario:
        value = getattr(args, key, None)
        if value is not None:
            scenario[key] = value
    scenario["command"] = args.command
    if scenario["format"] is None:
        scenario["format"] = _FORMAT_DEFAULT[args.command]
    return scenario


def _resolve(scenario: dict) -> dict:
    """Fill derived values so the echoed scenario is fully explicit."""
    cfg = FieldConfig(
        omega=float(scenario["omega"]),
        eps_tilde=float(scenario["eps_tilde"]),
        z=scenario["z"] if scenario["z"] is None else float(scenario["z"]),
        c=float(scenario["c"]),
    )
    scenario["z"] = cfg.z
    alpha = complex(scenario["alpha"][0], scenario["alpha"][1])
    if scenario["alpha_mag"] is None:
        scenario["alpha_mag"] = abs(alpha)
    if scenario["theta"] is None:
        scenario["theta"] = (
            cmath.phase(alpha) if scenario["theta_from_alpha"] else math.pi / 5
        )
    if scenario["dim"] is None:
        level = max(int(scenario["n"]), int(scenario["nmax"]))
        scenario["dim"] = max(64, default_dim(alpha, level + 2))
    if scenario["slit_separation"] is None:
        scenario["slit_separation"] = 5.0 * cfg.wavelength
    if scenario["screen_distance"] is None:
        scenario["screen_distance"] = 1000.0 * cfg.wavelength
    return scenario


def _fmt(value: float) -> str:
    return format(value, ".17g")


def _scenario_json(scenario: dict) -> str:
    return json.dumps(scenario, sort_keys=True, separators=(",", ":"))


def _payload_json(scenario: dict, payload: dict) -> str:
    return json.dumps(
        {"scenario": scenario, **payload}, sort_keys=True, indent=2
    ) + "\n"


def _csv_text(scenario: dict, header: str, rows: list[list[float]]) -> str:
    lines = [f"# scenario: {_scenario_json(scenario)}", header]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(path) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _resolve_out(scenario: dict) -> str | None:
    out = scenario["out"]
    if out is None:
        return None
    base = os.environ.get(OUT_DIR_ENV)
    if base and not os.path.isabs(out):
        return os.path.join(base, out)
    return out


def _emit(scenario: dict, text: str, figure_fn=None) -> None:
    out = _resolve_out(scenario)
    if out is None:
        sys.stdout.write(text)
        return
    _atomic_write(out, text)
    if figure_fn is not None and scenario["plot"]:
        figure_fn(os.path.splitext(out)[0] + ".png")


def _field_expr(scenario: dict, cfg: FieldConfig):
    kind = scenario["field"]
    if kind == "electric":
        return electric_field_expr(cfg)
    if kind == "magnetic":
        return magnetic_field_expr(cfg)
    return perturbed_field_expr(cfg)


def _state(scenario: dict):
    alpha = complex(scenario["alpha"][0], scenario["alpha"][1])
    kind = scenario["state"]
    if kind == "coherent":
        return CoherentState(alpha)
    if kind == "number":
        return NumberState(int(scenario["n"]))
    return DisplacedState(
        alpha,
        int(scenario["n"]),
        Convention(scenario["convention"]),
        bool(scenario["normalize"]),
    )


def _cfg(scenario: dict) -> FieldConfig:
    return FieldConfig(
        omega=float(scenario["omega"]),
        eps_tilde=float(scenario["eps_tilde"]),
        z=float(scenario["z"]),
        c=float(scenario["c"]),
    )


# ---------------------------------------------------------------------------
# commands


def _cmd_verify(scenario: dict) -> int:
    cfg = _cfg(scenario)
    alpha = complex(scenario["alpha"][0], scenario["alpha"][1])
    report = verify_report(
        alpha,
        int(scenario["nmax"]),
        cfg,
        dim=int(scenario["dim"]),
        structural_theta=float(scenario["theta"]),
    )
    if scenario["format"] == "json":
        text = _payload_json(scenario, report.to_json_obj())
    else:
        buffer = io.StringIO()
        buffer.write(f"# scenario: {_scenario_json(scenario)}\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["id", "convention", "expected", "measured", "tol",
                         "pass"])
        for row in report.checks:
            writer.writerow(
                [row.id, row.convention,
                 json.dumps(row.expected, sort_keys=True),
                 json.dumps(row.measured, sort_keys=True),
                 _fmt(row.tol), str(row.passed).lower()]
            )
        text = buffer.getvalue()

    def figure(path):
        from .plotting import save_report_figure

        save_report_figure(report, path)

    _emit(scenario, text, figure)
    return EXIT_OK if report.all_pass else EXIT_VERIFY_FAILED


def _cmd_series(scenario: dict) -> int:
    cfg = _cfg(scenario)
    expr = _field_expr(scenario, cfg)
    if scenario["emit"] == "expr":
        text = _payload_json(scenario, {"expr": operator_expr_to_json(expr)})
        _emit(scenario, text)
        return EXIT_OK
    grid = make_time_grid(
        cfg.omega, int(scenario["periods"]), int(scenario["samples_per_period"])
    )
    series = expectation_series(
        expr,
        _state(scenario),
        cfg,
        grid,
        path=scenario["path"],
        space=FockSpace(int(scenario["dim"])),
    )
    if scenario["format"] == "csv":
        rows = [
            [t, v.real, v.imag] for t, v in zip(series.t, series.values)
        ]
        text = _csv_text(scenario, "t,re,im", rows)
    else:
        text = _payload_json(
            scenario,
            {
                "t": [float(t) for t in series.t],
                "re": [float(v.real) for v in series.values],
                "im": [float(v.imag) for v in series.values],
            },
        )

    def figure(path):
        from .plotting import save_series_figure

        save_series_figure(series, path)

    _emit(scenario, text, figure)
    return EXIT_OK


def _cmd_modes(scenario: dict) -> int:
    cfg = _cfg(scenario)
    expr = _field_expr(scenario, cfg)
    n = int(scenario["n"])
    signal = displaced_state_expectation(
        expr,
        n,
        Convention(scenario["convention"]),
        bool(scenario["normalize"]),
    )
    if scenario["emit"] == "expr":
        text = _payload_json(scenario, {"signal": time_scalar_to_json(signal)})
        _emit(scenario, text)
        return EXIT_OK
    mode_list = decompose_modes(
        signal,
        cfg.omega,
        float(scenario["theta"]),
        n,
        alpha_mag=float(scenario["alpha_mag"]),
    )
    if scenario["format"] == "json":
        text = _payload_json(scenario, mode_list.to_json_obj())
    else:
        rows = [[m.phase, m.amplitude] for m in mode_list.modes]
        text = _csv_text(scenario, "phase,amplitude", rows)

    def figure(path):
        from .plotting import save_modes_figure

        save_modes_figure(mode_list, path)

    _emit(scenario, text, figure)
    return EXIT_OK


def _cmd_transition(scenario: dict) -> int:
    alpha = complex(scenario["alpha"][0], scenario["alpha"][1])
    schedule = RampSchedule(
        kind=scenario["ramp"].replace("-", "_"),
        duration=float(scenario["duration"]) / float(scenario["omega"]),
    )
    result = run_transition(
        alpha,
        int(scenario["n"]),
        schedule,
        FockSpace(int(scenario["dim"])),
        PropagatorConfig(steps_per_period=int(scenario["steps_per_period"])),
        omega=float(scenario["omega"]),
    )
    if scenario["format"] == "json":
        text = _payload_json(scenario, result.to_json_obj())
    else:
        obj = result.to_json_obj()
        rows = [
            ["fidelity_to_displaced", obj["fidelity_to_displaced"]],
            ["fidelity_to_number", obj["fidelity_to_number"]],
            ["norm_drift", obj["norm_drift"]],
        ]
        lines = [f"# scenario: {_scenario_json(scenario)}", "quantity,value"]
        for name, value in rows:
            lines.append(f"{name},{_fmt(value)}")
        text = "\n".join(lines) + "\n"

    def figure(path):
        from .plotting import save_transition_figure

        save_transition_figure(result, schedule, path)

    _emit(scenario, text, figure)
    return EXIT_OK


def _cmd_double_slit(scenario: dict) -> int:
    cfg = _cfg(scenario)
    geom = SlitGeometry(
        separation=float(scenario["slit_separation"]),
        distance=float(scenario["screen_distance"]),
        x=_screen_grid(scenario, cfg),
    )
    state = _state(scenario)
    if isinstance(state, DisplacedState):
        raise ValueError("double-slit supports coherent and number states")
    profile = double_slit_pattern(
        state, geom, cfg, space=FockSpace(int(scenario["dim"]))
    )
    if scenario["format"] == "csv":
        rows = [
            [x, i, f, profile.floor]
            for x, i, f in zip(profile.x, profile.intensity, profile.fringe_term)
        ]
        text = _csv_text(scenario, "x,intensity,fringe_term,floor", rows)
    else:
        text = _payload_json(scenario, profile.to_json_obj())

    def figure(path):
        from .plotting import save_double_slit_figure

        save_double_slit_figure(profile, path)

    _emit(scenario, text, figure)
    return EXIT_OK


def _screen_grid(scenario: dict, cfg: FieldConfig) -> np.ndarray:
    separation = float(scenario["slit_separation"])
    distance = float(scenario["screen_distance"])
    if separation > 0.0:
        fringe = cfg.wavelength * distance / separation
        half = 1.5 * fringe
    else:
        half = 1.5 * cfg.wavelength * 200.0
    return np.linspace(-half, half, int(scenario["screen_points"]))


_COMMANDS = {
    "verify": _cmd_verify,
    "series": _cmd_series,
    "modes": _cmd_modes,
    "transition": _cmd_transition,
    "double-slit": _cmd_double_slit,
}


def run(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_OK
    try:
        scenario = _resolve(_merge_scenario(args))
        return _COMMANDS[args.command](scenario)
    except (TruncationError, NormDriftError, NonRealSignalError) as exc:
        print(f"cavityfield: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"cavityfield: invalid input: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
