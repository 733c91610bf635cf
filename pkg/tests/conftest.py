"""Shared fixtures. The expensive propagation runs are session-scoped so the
transition tests and the acceptance gate reuse one set of results."""

import cmath
import math

import numpy as np
import pytest

import cavityfield as cf

ALPHA0 = 0.8
OMEGA = 1.0


@pytest.fixture(scope="session")
def transition_space():
    return cf.FockSpace(32)


@pytest.fixture(scope="session")
def adiabatic_results(transition_space):
    """Smooth 200/omega ramp from displaced levels 0..2."""
    schedule = cf.RampSchedule("smooth_cosine", 200.0 / OMEGA)
    return {
        n: cf.run_transition(ALPHA0, n, schedule, transition_space, omega=OMEGA)
        for n in range(3)
    }


@pytest.fixture(scope="session")
def sudden_limit_result(transition_space):
    """Linear ramp of duration 0.001/omega from the coherent state."""
    schedule = cf.RampSchedule("linear", 0.001 / OMEGA)
    return cf.run_transition(ALPHA0, 0, schedule, transition_space, omega=OMEGA)


@pytest.fixture(scope="session")
def propagator_order_ratio(transition_space):
    """Error-reduction factor when the step count doubles, against a
    quarter-step reference on a smooth ramp."""
    schedule = cf.RampSchedule("smooth_cosine", 10.0 / OMEGA)
    psi0 = cf.displaced_number_ket(ALPHA0, 1, transition_space)
    finals = {}
    for spp in (64, 128, 256):
        ket = cf.schrodinger_evolve(
            psi0, schedule, OMEGA, ALPHA0,
            cf.PropagatorConfig(steps_per_period=spp),
        )
        finals[spp] = ket.amps
    coarse = np.linalg.norm(finals[64] - finals[256])
    fine = np.linalg.norm(finals[128] - finals[256])
    return coarse / fine


@pytest.fixture(scope="session")
def battery_report():
    alpha = ALPHA0 * cmath.exp(1j * math.pi / 5)
    return cf.verify_report(alpha, 4, cf.FieldConfig(), dim=64)


@pytest.fixture(scope="session")
def slit_profiles():
    cfg = cf.FieldConfig()
    geom = cf.SlitGeometry.default(cfg)
    return {
        "coherent": cf.double_slit_pattern(cf.CoherentState(1.0 + 0j), geom, cfg),
        "number": cf.double_slit_pattern(cf.NumberState(1), geom, cfg),
        "geom": geom,
        "cfg": cfg,
    }
