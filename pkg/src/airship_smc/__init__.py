"""Rigid-body airship simulator with a robust sliding-mode tracking controller."""

from .allocation import EngineCommands, EngineLayout, ResidualTooLarge, ThrustAllocator, \
    ThrustCurve, apply_actuator_model, engine_wrench_matrix, to_engine_commands
from .controller import ControllerParams, ShapeViolation, SingularLambda0, SlidingState, \
    control_law, lyapunov_rate, required_gain, sample_disturbance, sliding_state, \
    sliding_variable, switching_vector, validate_mass_estimate
from .dynamics import CustomPlant, DynamicsModel, SimplifiedPlant, StateDerivative, \
    VehicleState, coriolis_matrix, kinetic_energy, quadratic_damping, state_derivative, step
from .engine import AllocationSettings, InitialState, ScenarioConfig, run_scenario
from .errors import AuxError, ConeDegenerate, LateralDegenerate, SingularConfiguration, \
    SingularLine, TrackingError, XiMatrix, ZeroPositionError, aux_error, cone_residual, \
    edot, is_near_singular_line, lambda0, tracking_error, xi_matrix
from .measurement import MeasurementModel, MeasurementSampler
from .runlog import CSV_COLUMNS, EmptyWindow, RunLog, summarize
from .so3 import integrate_rotation, is_rotation, orthonormality_defect, rotation_exp, skew
from .trajectory import CustomTrajectory, LineTrajectory, TanhSTrajectory

__version__ = "0.1.0"
