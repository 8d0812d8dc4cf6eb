"""Wrench distribution to four tilt engines in the body x-z plane.

Each engine i sits at (x_i, y_i, z_i) from the center of gravity and can
produce a force (fx_i, 0, fz_i) in the body frame.  Stacking the per-engine
force components into an 8-vector [1x 1z 2x 2z 3x 3z 4x 4z], the realized
wrench is a fixed 6x8 matrix times that vector; its second row is
identically zero (no engine can push sideways), so the matrix has rank 5
for any sane layout.  Allocation is the Moore-Penrose minimum-norm solve.

Per-engine commands are magnitude f = sqrt(|[fx fz]|) and tilt
alpha = atan2(fz, fx).  The square root makes f a motor command, not a
force: a command-to-thrust curve that grows quadratically (the default)
maps it back to the requested force magnitude exactly.
"""

import math
from dataclasses import dataclass, field

import numpy as np


class ResidualTooLarge(ValueError):
    """Raised when the requested wrench is not realizable by the engine geometry."""


@dataclass(frozen=True)
class EngineLayout:
    """Engine positions relative to the center of gravity, m.

    Order: front-left, front-right, rear-left, rear-right.  Defaults put
    the engines on a 1.6 m x 1.2 m horizontal rectangle.
    """

    x: np.ndarray = field(default_factory=lambda: np.array([0.8, 0.8, -0.8, -0.8]))
    y: np.ndarray = field(default_factory=lambda: np.array([0.6, -0.6, 0.6, -0.6]))
    z: np.ndarray = field(default_factory=lambda: np.zeros(4))

    def __post_init__(self):
        for name in ("x", "y", "z"):
            v = np.asarray(getattr(self, name), dtype=float)
            if v.shape != (4,):
                raise ValueError(f"layout {name} must have 4 entries")
            object.__setattr__(self, name, v)
        if np.linalg.matrix_rank(engine_wrench_matrix(self)) != 5:
            raise ValueError("degenerate engine layout: wrench matrix rank below 5")


def engine_wrench_matrix(layout: EngineLayout) -> np.ndarray:
    """6x8 map from stacked per-engine (fx, fz) pairs to the body wrench.

    Row 2 (lateral force) is all zeros; torque rows follow r x F for an
    engine force (fx, 0, fz) at position (x, y, z).
    """
    b = np.zeros((6, 8))
    for i in range(4):
        cx, cz = 2 * i, 2 * i + 1
        b[0, cx] = 1.0
        b[2, cz] = 1.0
        b[3, cz] = layout.y[i]
        b[4, cx] = layout.z[i]
        b[4, cz] = -layout.x[i]
        b[5, cx] = -layout.y[i]
    return b


@dataclass(frozen=True)
class EngineCommands:
    """Per-engine command magnitude and tilt angle (rad, atan2 convention)."""

    magnitude: np.ndarray   # (4,) >= 0
    tilt: np.ndarray        # (4,) in (-pi, pi]

    def force_targets(self) -> np.ndarray:
        """(4, 2) commanded (fx, fz) force per engine: magnitude^2 along tilt."""
        m2 = self.magnitude**2
        return np.column_stack([m2 * np.cos(self.tilt), m2 * np.sin(self.tilt)])


def to_engine_commands(f_xz) -> EngineCommands:
    """Commands from an allocated 8-vector: f = sqrt(|[fx fz]|), alpha = atan2(fz, fx)."""
    f = np.asarray(f_xz, dtype=float).reshape(4, 2)
    norms = np.hypot(f[:, 0], f[:, 1])
    return EngineCommands(magnitude=np.sqrt(norms), tilt=np.arctan2(f[:, 1], f[:, 0]))


class ThrustCurve:
    """Monotone command-to-thrust map with saturation.

    Default: thrust = command^2, saturating at ``max_thrust`` N.  A measured
    curve can be supplied as a table (strictly increasing commands starting
    at 0, nondecreasing thrusts starting at 0); evaluation interpolates
    linearly and clips beyond the last point.
    """

    def __init__(self, commands=None, thrusts=None, max_thrust: float = 2.0):
        if (commands is None) != (thrusts is None):
            raise ValueError("supply both table columns or neither")
        if commands is not None:
            commands = np.asarray(commands, dtype=float)
            thrusts = np.asarray(thrusts, dtype=float)
            if commands.ndim != 1 or commands.shape != thrusts.shape or commands.size < 2:
                raise ValueError("curve table needs two equal-length columns, >= 2 rows")
            if (np.diff(commands) <= 0).any():
                raise ValueError("curve commands must be strictly increasing")
            if (np.diff(thrusts) < 0).any():
                raise ValueError("curve thrusts must be nondecreasing")
            if commands[0] != 0.0 or thrusts[0] != 0.0:
                raise ValueError("curve must start at (0, 0)")
        if max_thrust <= 0:
            raise ValueError("max_thrust must be > 0")
        self.commands = commands
        self.thrusts = thrusts
        self.max_thrust = float(max_thrust)

    @classmethod
    def from_csv(cls, path) -> "ThrustCurve":
        """Load a two-column CSV (command, thrust_N)."""
        table = np.loadtxt(path, delimiter=",", ndmin=2)
        if table.shape[1] != 2:
            raise ValueError(f"thrust curve {path} must have exactly 2 columns")
        return cls(commands=table[:, 0], thrusts=table[:, 1],
                   max_thrust=float(table[-1, 1]))

    def thrust(self, command):
        """Thrust (N) for a command (scalar or array), command < 0 clipped to 0."""
        c = np.maximum(np.asarray(command, dtype=float), 0.0)
        if self.commands is None:
            c = np.minimum(c, math.sqrt(self.max_thrust))
            return c * c
        return np.interp(c, self.commands, self.thrusts)


class ThrustAllocator:
    """Cached pseudo-inverse allocation for a fixed engine layout.

    The wrench matrix is structurally rank-deficient (zero lateral row), so
    the pseudo-inverse is taken via SVD with a relative singular-value
    cutoff of 1e-10.
    """

    def __init__(self, layout: EngineLayout | None = None):
        self.layout = layout if layout is not None else EngineLayout()
        self.matrix = engine_wrench_matrix(self.layout)
        self.pinv = np.linalg.pinv(self.matrix, rcond=1e-10)

    def allocate(self, tau) -> np.ndarray:
        """Minimum-norm 8-vector realizing tau; raises if tau is out of range.

        Any wrench with zero lateral component is realizable for a valid
        layout; a nonzero lateral request leaves a residual and raises.
        """
        tau = np.asarray(tau, dtype=float)
        f = self.pinv @ tau
        residual = float(np.linalg.norm(self.matrix @ f - tau))
        tol = 1e-9 * max(1.0, float(np.linalg.norm(tau)))
        if residual > tol:
            raise ResidualTooLarge(
                f"wrench not realizable: |B f - tau| = {residual:.3e} (tol {tol:.3e})"
            )
        return f

    def wrench_from_forces(self, forces) -> np.ndarray:
        """Body wrench produced by realized per-engine (fx, fz) forces, (4, 2)."""
        return self.matrix @ np.asarray(forces, dtype=float).reshape(8)


def apply_actuator_model(commands: EngineCommands, prev_forces, dt: float,
                         curve: ThrustCurve, lag: float,
                         allocator: ThrustAllocator):
    """Realized wrench after first-order lag and thrust-curve saturation.

    ``prev_forces`` is the (4, 2) lagged commanded-force state; the lag is
    applied in the per-engine force plane (exact discrete first-order
    update), which avoids tilt-angle wraparound.  The lagged force is then
    pushed through the thrust curve: command sqrt(|w|), realized magnitude
    curve.thrust(command), direction preserved.  With lag = 0 and the
    default curve below saturation this is an exact pass-through.

    Returns (wrench, new_forces).
    """
    if lag < 0:
        raise ValueError("lag must be >= 0")
    target = commands.force_targets()
    prev = np.asarray(prev_forces, dtype=float).reshape(4, 2)
    if lag == 0.0:
        w = target
    else:
        w = prev + (1.0 - math.exp(-dt / lag)) * (target - prev)
    norms = np.hypot(w[:, 0], w[:, 1])
    thrusts = curve.thrust(np.sqrt(norms))
    scale = np.where(norms > 0.0, thrusts / np.where(norms > 0.0, norms, 1.0), 0.0)
    realized = w * scale[:, None]
    return allocator.wrench_from_forces(realized), w
