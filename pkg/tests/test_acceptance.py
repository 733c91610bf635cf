"""Acceptance gate: every criterion at its stated tolerance.

Each test prints one pass line when its criterion holds; a failed assert
is the fail line.  Expensive propagation runs come from session fixtures
shared with the transition tests.
"""

import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

import cavityfield as cf
from cavityfield.algebra import Convention, TimeScalar
from cavityfield.exact import CoeffPoly
from cavityfield.modes import NonRealSignalError, phase_distance, wrap_phase

AMP = CoeffPoly.amplitude()
CONJ = CoeffPoly.amplitude_conjugate()


def report(line):
    print(f"[acceptance] {line}: PASS")


def test_c01_ladder_commutator():
    a, ad = cf.annihilation(), cf.creation()
    assert cf.multiply(a, ad) - cf.multiply(ad, a) == cf.identity()
    space = cf.FockSpace(64)
    am, adm = (op.mat for op in cf.ladder_matrices(space))
    comm = am @ adm - adm @ am
    block = comm[:63, :63]
    assert np.max(np.abs(block - np.eye(63))) <= 1e-12
    report("C01 ladder commutator, symbolic and truncated matrix")


def test_c02_coherent_eigenvalue():
    space = cf.FockSpace(64)
    a, _ = cf.ladder_matrices(space)
    probes = (0.5 + 0j, 0.3 - 0.4j, 0.8 * cmath.exp(1j * math.pi / 5))
    for alpha in probes:
        ket = cf.coherent_ket(alpha, space)
        assert abs(cf.expectation(a, ket) - alpha) <= 1e-10
    report("C02 coherent annihilation eigenvalue at dim 64")


def test_c03_zero_field_in_number_states():
    cfg = cf.FieldConfig()
    grid = cf.make_time_grid(cfg.omega)
    expr = cf.electric_field_expr(cfg)
    for n in range(6):
        series = cf.expectation_series(expr, cf.NumberState(n), cfg, grid)
        assert np.max(np.abs(series.values)) <= 1e-10
    report("C03 number states carry no mean field over a full period")


def test_c04_classical_standing_wave():
    cfg = cf.FieldConfig(eps_tilde=1.25)
    prefactor = cfg.eps_tilde * cfg.sin_kz
    wave = cf.coherent_expectation(cf.electric_field_expr(cfg))
    assert wave == TimeScalar.from_map(
        {-1: AMP.scaled(prefactor), +1: CONJ.scaled(prefactor)}
    )
    alpha = 0.8 * cmath.exp(1j * math.pi / 5)
    grid = cf.make_time_grid(cfg.omega)
    series = cf.expectation_series(
        cf.electric_field_expr(cfg), cf.CoherentState(alpha), cfg, grid
    )
    closed = (
        2 * prefactor * abs(alpha) * np.cos(cfg.omega * grid - cmath.phase(alpha))
    )
    assert np.max(np.abs(series.values - closed)) <= 1e-8
    report("C04 coherent standing wave, exact and sampled")


def test_c05_displaced_frame_dead_end():
    cfg = cf.FieldConfig()
    prefactor = cfg.eps_tilde * cfg.sin_kz
    signal = cf.coherent_expectation(cf.perturbed_field_expr(cfg))
    expected = TimeScalar.from_map(
        {
            +1: (CONJ - AMP).scaled(prefactor),
            0: AMP.scaled(2 * Fraction(prefactor)),
        }
    )
    assert signal == expected
    residual = cf.imag_residual(signal, 1.0, math.pi / 4)
    assert residual > 0.1 * cfg.eps_tilde
    with pytest.raises(NonRealSignalError):
        cf.to_real_modes(signal, 1.0, math.pi / 4)
    report("C05 displaced-frame expectation stays complex off the real axis")


def test_c06_printed_sandwich_polynomials():
    a, ad = cf.annihilation(), cf.creation()
    one_plus = CoeffPoly.one() + AMP * CONJ

    def ts(poly):
        return TimeScalar.from_map({0: poly})

    assert cf.coherent_expectation(cf.multiply(a, cf.multiply(ad, ad))) == ts(
        CONJ.scaled(2) + CONJ * AMP * CONJ
    )
    assert cf.coherent_expectation(cf.multiply(ad, ad)) == ts(CONJ * CONJ)
    assert cf.coherent_expectation(cf.multiply(a, ad)) == ts(CoeffPoly.one() + AMP * CONJ)
    assert cf.coherent_expectation(ad) == ts(CONJ)
    assert cf.displaced_state_expectation(ad, 1, Convention.PAPER, False) == ts(
        CONJ.scaled(2) * one_plus - CONJ * CONJ * CONJ - AMP * one_plus
    )
    assert cf.displaced_state_expectation(a, 1, Convention.PAPER, False) == ts(
        AMP.scaled(2) * one_plus - AMP * AMP * AMP - CONJ * one_plus
    )
    report("C06 printed level-1 sandwich polynomials, exact")


def test_c07_first_excited_mode_triplet():
    cfg = cf.FieldConfig()
    prefactor = cfg.eps_tilde * cfg.sin_kz
    theta = math.pi / 5
    a_mag = 0.8
    signal = cf.displaced_state_expectation(
        cf.electric_field_expr(cfg), 1, Convention.PAPER, False
    )
    fit = cf.to_real_modes(signal, a_mag, theta)
    assert len(fit.modes) == 3
    assert fit.residual < 1e-9
    want = {
        wrap_phase(theta): 4 * a_mag * (1 + a_mag**2) * prefactor,
        wrap_phase(3 * theta): -2 * a_mag**3 * prefactor,
        wrap_phase(-theta): -2 * a_mag * (1 + a_mag**2) * prefactor,
    }
    for phase, amplitude in want.items():
        assert fit.amplitude_at(phase) == pytest.approx(amplitude, rel=1e-12)
    report("C07 first excited field is the printed three-mode sum")


def test_c08_mode_lattice_counts(battery_report):
    realized = {}
    for n in range(5):
        row = battery_report.row(f"mode_lattice_level{n}")
        assert row.passed
        assert row.measured["count"] <= 2 * n + 1
        assert row.measured["on_lattice"]
        realized[n] = row.measured["count"]
    row = battery_report.row("second_excited_phase_set")
    assert row.passed
    theta = battery_report.row("mode_lattice_level2").measured["theta"]
    expected = sorted(
        wrap_phase(m * theta) for m in (5, 3, 1, -1, -3)
    )
    assert all(
        phase_distance(x, y) <= 1e-8 for x, y in zip(row.measured, expected)
    )
    report(f"C08 mode lattice, realized counts {realized}")


def test_c09_oracle_equivalence_and_level_independence(battery_report):
    for n in range(5):
        row = battery_report.row(f"displaced_oracle_agreement_level{n}")
        assert row.passed
        assert row.measured <= 1e-8
    row = battery_report.row("displaced_mean_field_matches_coherent")
    assert row.passed
    assert row.measured["symbolic_equal"]
    assert row.measured["max_dev"] <= 1e-8
    report("C09 adjoint symbolic vs oracle, level-independent mean field")


def test_c10_sudden_limit(sudden_limit_result):
    assert sudden_limit_result.fidelity_to_displaced >= 0.999
    report("C10 millisecond ramp keeps the coherent state")


def test_c11_adiabatic_limit(adiabatic_results):
    for n in range(3):
        assert adiabatic_results[n].fidelity_to_number >= 0.99
    report("C11 slow ramp lands on the bare number states, levels 0..2")


def test_c12_double_slit(slit_profiles):
    coherent = slit_profiles["coherent"]
    number = slit_profiles["number"]
    assert coherent.visibility >= 0.99
    assert np.max(np.abs(number.fringe_term)) < 1e-10
    flat_dev = np.max(number.intensity) - np.min(number.intensity)
    assert flat_dev < 1e-10
    report("C12 coherent fringes, flat number-state screen")


def test_c13_propagator_order_and_drift(
    propagator_order_ratio, adiabatic_results, sudden_limit_result
):
    assert propagator_order_ratio >= 12.0
    drifts = [r.norm_drift for r in adiabatic_results.values()]
    drifts.append(sudden_limit_result.norm_drift)
    assert max(drifts) <= 1e-7
    report(
        "C13 step halving gains "
        f"{propagator_order_ratio:.1f}x, max drift {max(drifts):.2e}"
    )
