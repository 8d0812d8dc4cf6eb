"""Sliding-mode control law on the auxiliary error triple.

The sliding variable is sigma = de/dt + K (e - offset) with a strictly
positive diagonal gain K and an offset that keeps the closed loop away
from the rank-loss configurations of the error factorization.  The wrench
is

    tau = - Mhat P Xi^T s(sigma)

where P is a diagonal gain whose second entry is exactly zero and Mhat is
a mass estimate whose second row is [0, b, 0, 0, 0, 0]; together these
guarantee a structurally zero lateral force.  s() is either the signum or
a sigmoid with a boundary layer proportional to the matching auxiliary
error component.  The law reads only (Xi, sigma, e) and the gain
parameters, never the plant model, which is where its robustness to model
error comes from.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import DynamicsModel, VehicleState, _rk4_step
from .errors import AuxError, XiMatrix, aux_error, edot, tracking_error, xi_matrix

SQRT3 = math.sqrt(3.0)
# Floor added to the sigmoid denominator so a vanishing auxiliary error
# cannot divide by zero.
BOUNDARY_FLOOR = 1e-9

SWITCHING_MODES = ("sign", "sigmoid")


class ShapeViolation(ValueError):
    """Raised when the mass estimate's second row breaks the [0, b, 0, 0, 0, 0] form."""


class SingularLambda0(ValueError):
    """Raised when a gain bound is requested at lambda0 <= 0 (on a singular line)."""


def _as_triple(e) -> np.ndarray:
    if isinstance(e, AuxError):
        return e.array()
    e = np.asarray(e, dtype=float)
    if e.shape != (3,):
        raise ValueError("auxiliary error must have 3 components")
    return e


def check_mass_estimate_shape(mhat: np.ndarray) -> None:
    """Raise ShapeViolation unless row 2 of mhat is [0, b, 0, 0, 0, 0]."""
    row = np.asarray(mhat, dtype=float)[1]
    off = row[[0, 2, 3, 4, 5]]
    if (off != 0.0).any():
        raise ShapeViolation(
            f"second row of the mass estimate must be [0, b, 0, 0, 0, 0], got {row}"
        )


def validate_mass_estimate(mhat, inertia) -> float:
    """Stability margin of the mass estimate: min eig of M^-1 Mhat - I.

    The estimate is admissible when the returned value is >= 0 and the
    second-row shape holds (checked here, raising ShapeViolation).  The
    product M^-1 Mhat is not symmetric in general; eigenvalues are ordered
    by real part.
    """
    mhat = np.asarray(mhat, dtype=float)
    inertia = np.asarray(inertia, dtype=float)
    if mhat.shape != (6, 6) or inertia.shape != (6, 6):
        raise ValueError("mass matrices must be 6x6")
    check_mass_estimate_shape(mhat)
    eig = np.linalg.eigvals(np.linalg.solve(inertia, mhat) - np.eye(6))
    return float(eig.real.min())


@dataclass(frozen=True)
class ControllerParams:
    """Gains and switching configuration of the sliding-mode law.

    gains            diagonal of K, all > 0 (1/s)
    offset           sliding-surface offset, first entry > 0 m, the two
                     unitless entries in (0, 1)
    wrench_gains     diagonal of P; second entry exactly 0, the rest > 0
    mass_estimate    6x6 Mhat; second row [0, b, 0, 0, 0, 0], invertible
    boundary_widths  sigmoid widths per error component, > 0
    reach_margin     required reaching rate margin (test-side gain sizing)
    switching        "sign" or "sigmoid"
    """

    gains: np.ndarray
    offset: np.ndarray
    wrench_gains: np.ndarray
    mass_estimate: np.ndarray
    boundary_widths: np.ndarray = field(default_factory=lambda: np.full(3, 0.1))
    reach_margin: float = 0.01
    switching: str = "sigmoid"

    def __post_init__(self):
        object.__setattr__(self, "gains", np.asarray(self.gains, dtype=float))
        object.__setattr__(self, "offset", np.asarray(self.offset, dtype=float))
        object.__setattr__(self, "wrench_gains", np.asarray(self.wrench_gains, dtype=float))
        object.__setattr__(self, "mass_estimate", np.asarray(self.mass_estimate, dtype=float))
        object.__setattr__(self, "boundary_widths", np.asarray(self.boundary_widths, dtype=float))
        if self.gains.shape != (3,) or (self.gains <= 0).any():
            raise ValueError("gains must be 3 positive entries")
        if self.offset.shape != (3,):
            raise ValueError("offset must have 3 entries")
        if not (self.offset[0] > 0 and 0 < self.offset[1] < 1 and 0 < self.offset[2] < 1):
            raise ValueError(
                f"offset must lie in (0, inf) x (0, 1) x (0, 1), got {self.offset}"
            )
        p = self.wrench_gains
        if p.shape != (6,):
            raise ValueError("wrench_gains must have 6 entries")
        if p[1] != 0.0:
            raise ValueError(f"second wrench gain must be exactly 0, got {p[1]}")
        named = p[[0, 2, 3, 4, 5]]
        if (named <= 0).any():
            raise ValueError(f"wrench gains other than the lateral one must be > 0, got {p}")
        if self.mass_estimate.shape != (6, 6):
            raise ValueError("mass_estimate must be 6x6")
        check_mass_estimate_shape(self.mass_estimate)
        # Invertibility is an added requirement: the stability argument
        # manipulates Mhat^-1 even though only the eigenvalue condition and
        # the row shape are stated for admissibility.
        if abs(np.linalg.det(self.mass_estimate)) < 1e-12:
            raise ValueError("mass_estimate must be invertible")
        if self.boundary_widths.shape != (3,) or (self.boundary_widths <= 0).any():
            raise ValueError("boundary_widths must be 3 positive entries")
        if not self.reach_margin > 0:
            raise ValueError("reach_margin must be > 0")
        if self.switching not in SWITCHING_MODES:
            raise ValueError(f"switching must be one of {SWITCHING_MODES}")


@dataclass(frozen=True)
class SlidingState:
    """Sliding variable together with the error and error rate it was built from."""

    sigma: np.ndarray
    aux: AuxError
    edot: np.ndarray


def sliding_variable(e, e_rate, params: ControllerParams) -> np.ndarray:
    """sigma = de/dt + K (e - offset)."""
    return np.asarray(e_rate, dtype=float) + params.gains * (_as_triple(e) - params.offset)


def sliding_state(aux: AuxError, e_rate, params: ControllerParams) -> SlidingState:
    return SlidingState(sigma=sliding_variable(aux, e_rate, params), aux=aux,
                        edot=np.asarray(e_rate, dtype=float))


def switching_vector(sigma, e, params: ControllerParams) -> np.ndarray:
    """Componentwise switching term: signum, or the adaptive-width sigmoid.

    In sigmoid mode each component is s_i / (|s_i| + eps_i |e_i| + floor):
    odd, bounded by 1, monotone in s_i, and approaching signum as eps -> 0.
    sign(0) is 0 in both modes.
    """
    sigma = np.asarray(sigma, dtype=float)
    if params.switching == "sign":
        return np.sign(sigma)
    widths = params.boundary_widths * np.abs(_as_triple(e))
    return sigma / (np.abs(sigma) + widths + BOUNDARY_FLOOR)


def control_law(xi: XiMatrix, sigma, e, params: ControllerParams) -> np.ndarray:
    """Wrench tau = -Mhat P Xi^T s(sigma); the lateral component is exactly zero.

    Reads nothing about the plant: only the factorization, the sliding
    variable, the auxiliary error and the gain parameters.
    """
    sw = switching_vector(sigma, e, params)
    return -(params.mass_estimate @ (params.wrench_gains * (xi.matrix.T @ sw)))


def required_gain(g_bound: float, lam0: float, margin: float) -> float:
    """Smallest admissible named wrench gain: (margin + g_bound) / lambda0.

    Diverges as lambda0 -> 0, which is exactly the singular-line geometry.
    """
    if g_bound < 0:
        raise ValueError("disturbance bound must be >= 0")
    if margin <= 0:
        raise ValueError("margin must be > 0")
    if lam0 <= 0:
        raise SingularLambda0(f"gain bound undefined for lambda0 = {lam0}")
    return (margin + g_bound) / lam0


def _loop_quantities(state: VehicleState, params: ControllerParams, trajectory, t: float):
    te = tracking_error(state, trajectory.position(t))
    aux = aux_error(te)
    xi = xi_matrix(te, aux)
    twist_d = np.concatenate([trajectory.velocity(t), np.zeros(3)])
    e_rate = edot(te, state, twist_d, aux, xi)
    sigma = sliding_variable(aux, e_rate, params)
    return aux, xi, e_rate, sigma


def _sigma_after_flow(state: VehicleState, plant: DynamicsModel, tau, trajectory,
                      t: float, h: float, params: ControllerParams) -> np.ndarray:
    p, r, g = _rk4_step(state.pos, state.rot, state.twist, tau, plant, h)
    flowed = VehicleState(pos=p, rot=r, twist=g)
    _, _, _, sigma = _loop_quantities(flowed, params, trajectory, t + h)
    return sigma


def lyapunov_rate(state: VehicleState, plant: DynamicsModel, params: ControllerParams,
                  trajectory, t: float, h: float = 1e-5) -> float:
    """d/dt of 0.5 |sigma|^2 along the closed loop, via central differences.

    The wrench is frozen at its value at time t and the plant is flowed by
    +-h; the target moves along the trajectory.  Test-side diagnostic only.
    """
    aux, xi, _, sigma = _loop_quantities(state, params, trajectory, t)
    tau = control_law(xi, sigma, aux, params)
    s_plus = _sigma_after_flow(state, plant, tau, trajectory, t, h, params)
    s_minus = _sigma_after_flow(state, plant, tau, trajectory, t, -h, params)
    return float(sigma @ (s_plus - s_minus)) / (2.0 * h)


def sample_disturbance(state: VehicleState, plant: DynamicsModel, params: ControllerParams,
                       trajectory, t: float, h: float = 1e-5) -> np.ndarray:
    """Lumped disturbance g = sigma_dot - Xi M^-1 tau at one closed-loop state.

    sigma_dot comes from the same frozen-wrench central difference as
    ``lyapunov_rate``.  Sampling |g| along a trajectory gives the empirical
    bound used to size the wrench gains via ``required_gain``.
    """
    aux, xi, _, sigma = _loop_quantities(state, params, trajectory, t)
    tau = control_law(xi, sigma, aux, params)
    s_plus = _sigma_after_flow(state, plant, tau, trajectory, t, h, params)
    s_minus = _sigma_after_flow(state, plant, tau, trajectory, t, -h, params)
    sigma_dot = (s_plus - s_minus) / (2.0 * h)
    return sigma_dot - xi.matrix @ (plant.inertia_inv @ tau)
