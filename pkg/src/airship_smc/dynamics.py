"""Vehicle state propagation: rigid-body kinematics plus pluggable dynamics models.

The state is (p, R, gamma): position of the body frame in the base frame,
attitude as a rotation matrix, and the stacked body-frame twist
gamma = [nu, omega] (linear, angular).  Kinematics are

    p_dot = R @ nu,        R_dot = R @ S(omega),
    gamma_dot = M^-1 (tau - f(gamma, R)).

The default plant is a simplified model with identity inertia, a
skew-built Coriolis coupling and componentwise quadratic damping; the full
airship force model is left as an extension point (``CustomPlant``).

Time stepping uses a Munthe-Kaas style RK4: the attitude increment is
integrated in the Lie algebra and applied through the exponential map, so
the rotation stays on SO(3) exactly while (p, gamma) see a standard
4th-order step.
"""

from dataclasses import dataclass

import numpy as np

from .so3 import is_rotation, rotation_exp, skew


@dataclass(frozen=True)
class VehicleState:
    """Pose and twist of the vehicle: base-frame position, attitude, body twist."""

    pos: np.ndarray        # (3,) m, body-frame origin in the base frame
    rot: np.ndarray        # (3, 3) body-to-base rotation
    twist: np.ndarray      # (6,) [u v w p q r] body-frame linear/angular velocity

    def __post_init__(self):
        object.__setattr__(self, "pos", np.asarray(self.pos, dtype=float))
        object.__setattr__(self, "rot", np.asarray(self.rot, dtype=float))
        object.__setattr__(self, "twist", np.asarray(self.twist, dtype=float))
        if self.pos.shape != (3,) or self.twist.shape != (6,):
            raise ValueError("pos must be (3,) and twist (6,)")
        if not is_rotation(self.rot, tol=1e-8):
            raise ValueError("rot is not a rotation matrix")
        if not (np.isfinite(self.pos).all() and np.isfinite(self.twist).all()):
            raise ValueError("state entries must be finite")


@dataclass(frozen=True)
class StateDerivative:
    pos: np.ndarray        # (3,) p_dot
    rot: np.ndarray        # (3, 3) R_dot
    twist: np.ndarray      # (6,) gamma_dot


def coriolis_matrix(twist) -> np.ndarray:
    """6x6 Coriolis coupling built from skew blocks; antisymmetric for every twist.

    Block layout: zero top-left, -S(nu) on both off-diagonals, -S(omega)
    bottom-right.
    """
    twist = np.asarray(twist, dtype=float)
    sn = skew(twist[:3])
    c = np.zeros((6, 6))
    c[:3, 3:] = -sn
    c[3:, :3] = -sn
    c[3:, 3:] = -skew(twist[3:])
    return c


def quadratic_damping(twist, cp_diag=None) -> np.ndarray:
    """Componentwise quadratic damping force -cp_i * sign(g_i) * g_i^2.

    Opposes motion in every component; sign(0) is taken as 0 so rest is an
    exact equilibrium.  ``cp_diag`` defaults to ones.
    """
    g = np.asarray(twist, dtype=float)
    d = -np.sign(g) * g * g
    if cp_diag is not None:
        d = np.asarray(cp_diag, dtype=float) * d
    return d


def _check_spd(m: np.ndarray) -> None:
    if m.shape != (6, 6):
        raise ValueError("inertia matrix must be 6x6")
    if not np.allclose(m, m.T, atol=1e-9):
        raise ValueError("inertia matrix must be symmetric")
    if np.linalg.eigvalsh(m).min() <= 0.0:
        raise ValueError("inertia matrix must be positive definite")


class DynamicsModel:
    """Plant interface: inertia matrix M plus a force residual f(gamma, R).

    Subclasses implement ``force_residual``; ``accel`` then evaluates
    gamma_dot = M^-1 (tau - f).  M is validated SPD at construction and
    instances are immutable afterwards.
    """

    def __init__(self, inertia: np.ndarray):
        inertia = np.asarray(inertia, dtype=float)
        _check_spd(inertia)
        self.inertia = inertia
        self.inertia_inv = np.linalg.inv(inertia)

    def force_residual(self, twist: np.ndarray, rot: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def accel(self, twist: np.ndarray, rot: np.ndarray, tau: np.ndarray) -> np.ndarray:
        return self.inertia_inv @ (tau - self.force_residual(twist, rot))


class SimplifiedPlant(DynamicsModel):
    """Diagonal-inertia plant with Coriolis coupling and quadratic damping.

    force = C(gamma) @ gamma + cp * sign(gamma) * gamma^2, with C built by
    :func:`coriolis_matrix`.  Defaults to unit inertia and unit damping.
    """

    def __init__(self, mass_diag=None, cp_diag=None):
        mass_diag = np.ones(6) if mass_diag is None else np.asarray(mass_diag, dtype=float)
        if mass_diag.shape != (6,) or (mass_diag <= 0).any():
            raise ValueError("mass_diag must be 6 positive entries")
        super().__init__(np.diag(mass_diag))
        self.cp_diag = np.ones(6) if cp_diag is None else np.asarray(cp_diag, dtype=float)
        if self.cp_diag.shape != (6,) or (self.cp_diag < 0).any():
            raise ValueError("cp_diag must be 6 non-negative entries")
        self._minv_diag = 1.0 / mass_diag
        self._unit_mass = bool((mass_diag == 1.0).all())
        self._cp = tuple(float(c) for c in self.cp_diag)

    def force_residual(self, twist, rot=None):
        # C(gamma) @ gamma collapses to [-nu x omega, 0] because S(a) a = 0;
        # sign(g) g^2 is written g |g| so sign(0) = 0 falls out for free.
        ux = float(twist[0])
        uy = float(twist[1])
        uz = float(twist[2])
        wx = float(twist[3])
        wy = float(twist[4])
        wz = float(twist[5])
        cp = self._cp
        return np.array([
            cp[0] * ux * abs(ux) - (uy * wz - uz * wy),
            cp[1] * uy * abs(uy) - (uz * wx - ux * wz),
            cp[2] * uz * abs(uz) - (ux * wy - uy * wx),
            cp[3] * wx * abs(wx),
            cp[4] * wy * abs(wy),
            cp[5] * wz * abs(wz),
        ])

    def accel(self, twist, rot, tau):
        d = tau - self.force_residual(twist)
        return d if self._unit_mass else self._minv_diag * d


class CustomPlant(DynamicsModel):
    """Extension point for a full force model f = C(gamma) gamma + D(gamma) + G(R).

    Each term is an optional callable; omitted terms are zero.
    """

    def __init__(self, inertia, coriolis=None, damping=None, gravity=None):
        super().__init__(inertia)
        self._coriolis = coriolis
        self._damping = damping
        self._gravity = gravity

    def force_residual(self, twist, rot):
        f = np.zeros(6)
        if self._coriolis is not None:
            f += self._coriolis(twist) @ twist
        if self._damping is not None:
            f += self._damping(twist)
        if self._gravity is not None:
            f += self._gravity(rot)
        return f


def state_derivative(state: VehicleState, tau, plant: DynamicsModel) -> StateDerivative:
    """Instantaneous derivative of the state under wrench tau."""
    tau = np.asarray(tau, dtype=float)
    nu = state.twist[:3]
    om = state.twist[3:]
    return StateDerivative(
        pos=state.rot @ nu,
        rot=state.rot @ skew(om),
        twist=plant.accel(state.twist, state.rot, tau),
    )


def _dexpinv(ux, uy, uz, g):
    # Rate of the incremental rotation vector u for body-frame kinematics
    # R0 exp(S(u)): udot = dexpinv(-u)(omega) = omega + u x omega / 2
    # + u x (u x omega) / 12, truncated after the double commutator
    # (sufficient for a 4th-order step).  Scalar in and out: hot path.
    wx = float(g[3])
    wy = float(g[4])
    wz = float(g[5])
    cx = uy * wz - uz * wy
    cy = uz * wx - ux * wz
    cz = ux * wy - uy * wx
    dx = uy * cz - uz * cy
    dy = uz * cx - ux * cz
    dz = ux * cy - uy * cx
    return (wx + 0.5 * cx + dx / 12.0,
            wy + 0.5 * cy + dy / 12.0,
            wz + 0.5 * cz + dz / 12.0)


def _rk4_step(p0, r0, g0, tau, plant, dt):
    """One Munthe-Kaas RK4 step on raw arrays; dt may be negative (test use only)."""
    accel = plant.accel
    hdt = 0.5 * dt

    k1p = r0 @ g0[:3]
    k1g = accel(g0, r0, tau)
    k1ux = float(g0[3])
    k1uy = float(g0[4])
    k1uz = float(g0[5])

    r2 = r0 @ rotation_exp((hdt * k1ux, hdt * k1uy, hdt * k1uz))
    g2 = g0 + hdt * k1g
    k2p = r2 @ g2[:3]
    k2ux, k2uy, k2uz = _dexpinv(hdt * k1ux, hdt * k1uy, hdt * k1uz, g2)
    k2g = accel(g2, r2, tau)

    r3 = r0 @ rotation_exp((hdt * k2ux, hdt * k2uy, hdt * k2uz))
    g3 = g0 + hdt * k2g
    k3p = r3 @ g3[:3]
    k3ux, k3uy, k3uz = _dexpinv(hdt * k2ux, hdt * k2uy, hdt * k2uz, g3)
    k3g = accel(g3, r3, tau)

    r4 = r0 @ rotation_exp((dt * k3ux, dt * k3uy, dt * k3uz))
    g4 = g0 + dt * k3g
    k4p = r4 @ g4[:3]
    k4ux, k4uy, k4uz = _dexpinv(dt * k3ux, dt * k3uy, dt * k3uz, g4)
    k4g = accel(g4, r4, tau)

    c = dt / 6.0
    p1 = p0 + c * (k1p + 2.0 * (k2p + k3p) + k4p)
    g1 = g0 + c * (k1g + 2.0 * (k2g + k3g) + k4g)
    u1 = (c * (k1ux + 2.0 * (k2ux + k3ux) + k4ux),
          c * (k1uy + 2.0 * (k2uy + k3uy) + k4uy),
          c * (k1uz + 2.0 * (k2uz + k3uz) + k4uz))
    return p1, r0 @ rotation_exp(u1), g1


def step(state: VehicleState, tau, plant: DynamicsModel, dt: float) -> VehicleState:
    """Advance the state one fixed step under constant wrench tau.

    4th-order in (p, gamma); the attitude update goes through the
    exponential map at every stage so the result is exactly on SO(3).
    """
    if not 0.0 < dt <= 0.1:
        raise ValueError(f"dt must be in (0, 0.1], got {dt}")
    tau = np.asarray(tau, dtype=float)
    p1, r1, g1 = _rk4_step(state.pos, state.rot, state.twist, tau, plant, dt)
    return VehicleState(pos=p1, rot=r1, twist=g1)


def kinetic_energy(state: VehicleState, plant: DynamicsModel) -> float:
    """0.5 * gamma^T M gamma, the plant's kinetic energy."""
    return 0.5 * float(state.twist @ (plant.inertia @ state.twist))
