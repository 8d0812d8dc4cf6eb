import numpy as np
import pytest

from airship_smc import ControllerParams, VehicleState
from airship_smc.so3 import rotation_exp


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_rotation(rng):
    return rotation_exp(rng.normal(0.0, 1.2, 3))


def section4_params(**overrides):
    """Controller gains of the simulation-study scenario."""
    base = dict(
        gains=[0.1, 0.1, 0.1],
        offset=[0.2, 0.01, 0.01],
        wrench_gains=[5.0, 0.0, 5.0, 5.0, 5.0, 5.0],
        mass_estimate=10.0 * np.eye(6),
        boundary_widths=[1.0, 1.0, 1.0],
        switching="sigmoid",
    )
    base.update(overrides)
    return ControllerParams(**base)


def flight_params(**overrides):
    """Controller gains of the flight-analogue scenarios."""
    base = dict(
        gains=[0.1, 0.2, 0.2],
        offset=[0.2, 0.01, 0.01],
        wrench_gains=[0.06, 0.0, 0.015, 0.003, 0.003, 0.03],
        mass_estimate=10.0 * np.eye(6),
        boundary_widths=[0.1, 0.1, 0.1],
        switching="sigmoid",
    )
    base.update(overrides)
    return ControllerParams(**base)


def random_tracking_sample(rng, spread=5.0):
    """A (state, target, target_vel) triple with nondegenerate error geometry."""
    from airship_smc import aux_error, tracking_error

    while True:
        pos = rng.normal(0.0, spread, 3)
        rot = random_rotation(rng)
        twist = rng.normal(0.0, 1.0, 6)
        target = pos + rng.normal(0.0, spread, 3)
        state = VehicleState(pos, rot, twist)
        te = tracking_error(state, target)
        try:
            aux = aux_error(te)
        except ValueError:
            continue
        if min(aux.pe, te.lat_norm) < 1e-2:
            continue
        if min(aux.ke, aux.oe) < 5e-2 or min(abs(aux.ke - 1), abs(aux.oe - 1)) < 1e-3:
            continue
        return state, target, rng.normal(0.0, 1.0, 3)
