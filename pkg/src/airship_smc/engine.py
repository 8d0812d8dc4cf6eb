"""Closed-loop scenario engine: measure, control, allocate, step, log.

One scenario is one sequential fixed-rate loop.  Per control step the
engine samples the measurement model, forms the auxiliary errors and the
sliding variable from the measured pose, evaluates the control law, maps
the wrench through the propulsion model when in experiment mode, then
advances the plant with one or more RK4 substeps while the wrench is held.
Runs are deterministic given (config, seed).

Proximity to a singular error line (or a degenerate error geometry) is
handled per policy: "hold" keeps the previous wrench and logs an event,
"abort" raises with context.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .allocation import EngineLayout, ThrustAllocator, ThrustCurve, apply_actuator_model, \
    to_engine_commands
from .controller import ControllerParams, control_law, sliding_variable
from .dynamics import DynamicsModel, SimplifiedPlant, _rk4_step
from .errors import LateralDegenerate, SingularConfiguration, SingularLine, \
    ZeroPositionError, _tracking_error, aux_error, edot_from_xi, is_near_singular_line, \
    xi_matrix
from .measurement import MeasurementModel, MeasurementSampler
from .runlog import RunLog
from .so3 import rotation_exp
from .trajectory import LineTrajectory

MODES = ("simulation", "experiment")
POLICIES = ("hold", "abort")
EDOT_MODES = ("analytic", "numeric")


@dataclass(frozen=True)
class InitialState:
    """Initial pose and twist; attitude given as a rotation vector."""

    pos: np.ndarray = field(default_factory=lambda: np.zeros(3))
    rotvec: np.ndarray = field(default_factory=lambda: np.zeros(3))
    twist: np.ndarray = field(default_factory=lambda: np.zeros(6))

    def __post_init__(self):
        object.__setattr__(self, "pos", np.asarray(self.pos, dtype=float))
        object.__setattr__(self, "rotvec", np.asarray(self.rotvec, dtype=float))
        object.__setattr__(self, "twist", np.asarray(self.twist, dtype=float))


@dataclass(frozen=True)
class AllocationSettings:
    """Propulsion model used in experiment mode."""

    layout: EngineLayout = field(default_factory=EngineLayout)
    curve: ThrustCurve = field(default_factory=ThrustCurve)
    lag: float = 0.1   # s, first-order engine/servo time constant

    def __post_init__(self):
        if self.lag < 0:
            raise ValueError("lag must be >= 0")


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything one closed-loop run consumes."""

    controller: ControllerParams
    trajectory: object = field(default_factory=LineTrajectory)
    initial: InitialState = field(default_factory=InitialState)
    measurement: MeasurementModel = field(default_factory=MeasurementModel)
    allocation: AllocationSettings = field(default_factory=AllocationSettings)
    name: str = "scenario"
    horizon: float = 600.0
    control_rate: float = 100.0
    plant_substeps: int = 1
    log_rate: float = 10.0
    seed: int = 0
    mode: str = "simulation"
    singularity_policy: str = "hold"
    singularity_tol: float = 1e-4
    edot_mode: str = "analytic"
    edot_filter_tau: float = 0.05
    summary_t_min: float = 80.0
    mass_diag: np.ndarray = field(default_factory=lambda: np.ones(6))
    cp_diag: np.ndarray = field(default_factory=lambda: np.ones(6))

    def __post_init__(self):
        object.__setattr__(self, "mass_diag", np.asarray(self.mass_diag, dtype=float))
        object.__setattr__(self, "cp_diag", np.asarray(self.cp_diag, dtype=float))
        if self.horizon <= 0:
            raise ValueError("horizon must be > 0")
        if self.control_rate <= 0 or self.log_rate <= 0:
            raise ValueError("rates must be > 0")
        if self.plant_substeps < 1:
            raise ValueError("plant_substeps must be >= 1")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.singularity_policy not in POLICIES:
            raise ValueError(f"singularity_policy must be one of {POLICIES}")
        if self.singularity_tol < 0:
            raise ValueError("singularity_tol must be >= 0")
        if self.edot_mode not in EDOT_MODES:
            raise ValueError(f"edot_mode must be one of {EDOT_MODES}")
        if self.edot_filter_tau <= 0:
            raise ValueError("edot_filter_tau must be > 0")

    def build_plant(self) -> SimplifiedPlant:
        return SimplifiedPlant(mass_diag=self.mass_diag, cp_diag=self.cp_diag)


def run_scenario(config: ScenarioConfig, seed: int | None = None,
                 plant: DynamicsModel | None = None) -> RunLog:
    """Run one closed-loop scenario and return its log.

    ``seed`` overrides the config seed; ``plant`` overrides the default
    simplified plant (the controller never sees it either way).
    """
    seed = config.seed if seed is None else seed
    rng = np.random.default_rng(seed)
    if plant is None:
        plant = config.build_plant()
    params = config.controller
    traj = config.trajectory

    dt = 1.0 / config.control_rate
    n_steps = int(round(config.horizon * config.control_rate))
    substeps = config.plant_substeps
    dt_sub = dt / substeps
    log_every = max(1, int(round(config.control_rate / config.log_rate)))
    n_rows = (n_steps + log_every - 1) // log_every

    sampler = MeasurementSampler(config.measurement, rng, config.control_rate)
    experiment = config.mode == "experiment"
    if experiment:
        allocator = ThrustAllocator(config.allocation.layout)
        curve = config.allocation.curve
        lag = config.allocation.lag
        forces = np.zeros((4, 2))

    pos = config.initial.pos.copy()
    rot = rotation_exp(config.initial.rotvec)
    twist = config.initial.twist.copy()

    log_t = np.empty(n_rows)
    log_pos = np.empty((n_rows, 3))
    log_rot = np.empty((n_rows, 9))
    log_twist = np.empty((n_rows, 6))
    log_target = np.empty((n_rows, 3))
    log_e = np.empty((n_rows, 3))
    log_aux = np.empty((n_rows, 3))
    log_sigma = np.empty((n_rows, 3))
    log_tau = np.empty((n_rows, 6))
    log_realized = np.empty((n_rows, 6))
    log_fcmd = np.zeros((n_rows, 4))
    log_acmd = np.zeros((n_rows, 4))
    events: list = []

    numeric = config.edot_mode == "numeric"
    filt_gain = dt / (dt + config.edot_filter_tau)
    prev_e = None
    e_rate_filt = np.zeros(3)
    last_tau = np.zeros(6)
    last_aux = np.zeros(3)
    last_sigma = np.zeros(3)

    row = 0
    for k in range(n_steps):
        t = k * dt
        pos_m, rot_m = sampler.measure(k, pos, rot)
        target = traj.position(t)
        te = _tracking_error(pos_m, rot_m, target)
        try:
            aux = aux_error(te)
            line = is_near_singular_line(te, config.singularity_tol)
            if line is not SingularLine.NONE:
                raise SingularConfiguration(f"within tol of singular line {line.value}")
            xi = xi_matrix(te, aux)
            e_arr = aux.array()
            if numeric:
                raw = np.zeros(3) if prev_e is None else (e_arr - prev_e) / dt
                prev_e = e_arr
                e_rate_filt = e_rate_filt + filt_gain * (raw - e_rate_filt)
                e_rate = e_rate_filt
            else:
                e_rate = edot_from_xi(xi, rot_m, twist, traj.velocity(t))
            sigma = sliding_variable(e_arr, e_rate, params)
            tau = control_law(xi, sigma, aux, params)
            last_tau, last_aux, last_sigma = tau, e_arr, sigma
        except (ZeroPositionError, LateralDegenerate, SingularConfiguration) as exc:
            if config.singularity_policy == "abort":
                raise SingularConfiguration(f"t = {t:.3f} s: {exc}") from exc
            events.append((t, str(exc)))
            tau, e_arr, sigma = last_tau, last_aux, last_sigma

        if experiment:
            commands = to_engine_commands(allocator.allocate(tau))
            wrench, forces = apply_actuator_model(commands, forces, dt, curve, lag,
                                                  allocator)
        else:
            wrench = tau

        if k % log_every == 0:
            log_t[row] = t
            log_pos[row] = pos
            log_rot[row] = rot.reshape(9)
            log_twist[row] = twist
            log_target[row] = target
            log_e[row] = rot.T @ (target - pos)
            log_aux[row] = e_arr
            log_sigma[row] = sigma
            log_tau[row] = tau
            log_realized[row] = wrench
            if experiment:
                log_fcmd[row] = commands.magnitude
                log_acmd[row] = commands.tilt
            row += 1

        for _ in range(substeps):
            pos, rot, twist = _rk4_step(pos, rot, twist, wrench, plant, dt_sub)

    return RunLog(
        t=log_t, pos=log_pos, rot=log_rot, twist=log_twist, target=log_target,
        e_body=log_e, aux=log_aux, sigma=log_sigma, tau=log_tau,
        realized=log_realized, thrust_cmd=log_fcmd, tilt_cmd=log_acmd, events=events,
    )
