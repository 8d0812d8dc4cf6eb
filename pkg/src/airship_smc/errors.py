"""Body-frame tracking error, auxiliary error triple, and the error-rate factorization.

Given the body-frame position error e (target minus vehicle, rotated into
the body frame), the controller works with three scalars:

    pe = |e|                 distance to the target,
    ke = sqrt(1 - ex / pe)   forward-alignment error: 0 when e points along
                             the body x axis, sqrt(2) when it points backwards,
    oe = sqrt(1 - ly / pl)   lateral-alignment error built from the horizontal
                             vector l = base_z x e (zero when l lies on the
                             body y axis), pl = |l|.

Fixing ke constrains e to a double cone around the body x axis, which is
what bounds the uncontrolled lateral error; ``cone_residual`` checks that
identity.  The rate of (pe, ke, oe) factorizes as a 3x6 matrix acting on
the body twist, assembled by ``xi_matrix``; the factorization loses rank
exactly on three error lines, detected by ``is_near_singular_line`` and
measured by ``lambda0``.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .dynamics import VehicleState

# Below this scale the error geometry is treated as degenerate.
DEGENERATE_NORM = 1e-9


class ZeroPositionError(ValueError):
    """Raised when the position error norm vanishes (auxiliary errors undefined)."""


class LateralDegenerate(ValueError):
    """Raised when the error is parallel to the base z axis, so l = base_z x e = 0."""


class ConeDegenerate(ValueError):
    """Raised at ke = 1 where the error cone flattens into the body y-z plane."""


class SingularConfiguration(ValueError):
    """Raised when a scale factor of the error-rate factorization vanishes."""


class SingularLine(Enum):
    """The three error lines on which the factorization loses rank."""

    NONE = "none"
    E_ALONG_Y = "e_along_y"        # ex = ez = 0
    E_ALONG_X = "e_along_x"        # ey = ez = 0
    LAT_ALONG_Y = "lat_along_y"    # lx = lz = 0


@dataclass(frozen=True)
class TrackingError:
    """Position error in the body frame plus its horizontal companion vector."""

    e_body: np.ndarray    # (3,) body-frame position error, m
    e_lat: np.ndarray     # (3,) base_z x e_body, horizontal by construction, m
    base_z: np.ndarray    # (3,) base-frame z axis expressed in body coordinates
    lat_norm: float       # |e_lat|, m

    @property
    def norm(self) -> float:
        return float(math.sqrt(self.e_body @ self.e_body))


@dataclass(frozen=True)
class AuxError:
    """Auxiliary error triple (pe, ke, oe); pe in meters, ke and oe unitless."""

    pe: float
    ke: float
    oe: float

    def array(self) -> np.ndarray:
        return np.array([self.pe, self.ke, self.oe])


@dataclass(frozen=True)
class XiMatrix:
    """3x6 factorization of the auxiliary-error rate with respect to the body twist."""

    matrix: np.ndarray
    singular: bool        # True when a scale factor is close enough to zero to distrust rows


def _tracking_error(pos, rot, target_pos) -> TrackingError:
    """Raw-array core of :func:`tracking_error` (hot path of the sim loop)."""
    e = rot.T @ (target_pos - pos)
    bz = rot[2, :]                # third row of R = base z axis in body coordinates
    kx = float(bz[0])
    ky = float(bz[1])
    kz = float(bz[2])
    ex = float(e[0])
    ey = float(e[1])
    ez = float(e[2])
    lx = ky * ez - kz * ey
    ly = kz * ex - kx * ez
    lz = kx * ey - ky * ex
    return TrackingError(
        e_body=e,
        e_lat=np.array([lx, ly, lz]),
        base_z=bz,
        lat_norm=math.sqrt(lx * lx + ly * ly + lz * lz),
    )


def tracking_error(state: VehicleState, target_pos) -> TrackingError:
    """Body-frame tracking error toward ``target_pos`` (base frame)."""
    return _tracking_error(state.pos, state.rot, np.asarray(target_pos, dtype=float))


def aux_error(te: TrackingError) -> AuxError:
    """Auxiliary error triple from a tracking error.

    ke and oe are clamped at 0 against roundoff when the error is exactly
    aligned with the corresponding axis.
    """
    pe = te.norm
    if pe < DEGENERATE_NORM:
        raise ZeroPositionError(f"position error norm {pe:.3e} is degenerate")
    if te.lat_norm < DEGENERATE_NORM:
        raise LateralDegenerate(
            f"error is parallel to the base z axis (|l| = {te.lat_norm:.3e})"
        )
    ke = math.sqrt(max(0.0, 1.0 - float(te.e_body[0]) / pe))
    oe = math.sqrt(max(0.0, 1.0 - float(te.e_lat[1]) / te.lat_norm))
    return AuxError(pe=pe, ke=ke, oe=oe)


def cone_residual(e_body, ke: float) -> float:
    """Residual of the double-cone identity linking e and ke.

    Zero (to roundoff) whenever ke was computed from this error vector:
    ey^2 = ((1 - ke^2)^-2 - 1) ex^2 - ez^2.
    """
    if abs(ke - 1.0) < 1e-12:
        raise ConeDegenerate("cone is degenerate at ke = 1 (error in the body y-z plane)")
    if not 0.0 <= ke <= math.sqrt(2.0) + 1e-12:
        raise ValueError(f"ke must lie in [0, sqrt(2)] away from 1, got {ke}")
    ex, ey, ez = np.asarray(e_body, dtype=float)
    s = 1.0 - ke * ke
    return ey * ey - ((1.0 / (s * s) - 1.0) * ex * ex - ez * ez)


def xi_matrix(te: TrackingError, aux: AuxError | None = None) -> XiMatrix:
    """Assemble the 3x6 error-rate factorization.

    Row r maps the body twist to the rate of the r-th auxiliary error
    while the target is at rest; see ``edot`` for the moving-target term.
    """
    if aux is None:
        aux = aux_error(te)
    pe, ke, oe = aux.pe, aux.ke, aux.oe
    pl = te.lat_norm
    s_k = 2.0 * pe * ke
    s_o = 2.0 * pl * oe
    if pe < 1e-12 or pl < 1e-12 or s_k < 1e-12 or s_o < 1e-12:
        raise SingularConfiguration(
            f"vanishing scale factor: pe={pe:.3e} |l|={pl:.3e} "
            f"2*pe*ke={s_k:.3e} 2*|l|*oe={s_o:.3e}"
        )

    ex = float(te.e_body[0])
    ey = float(te.e_body[1])
    ez = float(te.e_body[2])
    lx = float(te.e_lat[0])
    ly = float(te.e_lat[1])
    lz = float(te.e_lat[2])
    kx = float(te.base_z[0])
    ky = float(te.base_z[1])
    kz = float(te.base_z[2])

    m = np.empty((3, 6))

    # Row 1: distance rate, -unit(e) . nu.
    m[0, 0] = -ex / pe
    m[0, 1] = -ey / pe
    m[0, 2] = -ez / pe
    m[0, 3:] = 0.0

    # Row 2: forward-alignment rate.  a = (ex/pe) unit(e) - x_axis.
    c = ex / (pe * pe)
    ax = c * ex - 1.0
    ay = c * ey
    az = c * ez
    m[1, 0] = -ax / s_k
    m[1, 1] = -ay / s_k
    m[1, 2] = -az / s_k
    # x_axis^T S(e) = (x_axis x e)^T = (0, -ez, ey)
    m[1, 3] = 0.0
    m[1, 4] = ez / s_k
    m[1, 5] = -ey / s_k

    # Row 3: lateral-alignment rate.  w = (ly/pl) unit(l) - y_axis.
    c = ly / (pl * pl)
    wx = c * lx
    wy = c * ly - 1.0
    wz = c * lz
    # left block: -(w x base_z)^T / s_o
    m[2, 0] = -(wy * kz - wz * ky) / s_o
    m[2, 1] = -(wz * kx - wx * kz) / s_o
    m[2, 2] = -(wx * ky - wy * kx) / s_o
    # right block: +(w x l)^T / s_o
    m[2, 3] = (wy * lz - wz * ly) / s_o
    m[2, 4] = (wz * lx - wx * lz) / s_o
    m[2, 5] = (wx * ly - wy * lx) / s_o

    return XiMatrix(matrix=m, singular=min(pe, pl, s_k, s_o) < 1e-6)


def edot_from_xi(xi: XiMatrix, rot, twist, target_vel) -> np.ndarray:
    """Auxiliary-error rate from a prebuilt factorization (hot path).

    ``target_vel`` is the target velocity in the base frame; it enters the
    error rate exactly like a vehicle velocity of opposite sign.
    """
    eff = twist.copy()
    eff[:3] -= rot.T @ target_vel
    return xi.matrix @ eff


def edot(te: TrackingError, state: VehicleState, target_twist, aux: AuxError | None = None,
         xi: XiMatrix | None = None) -> np.ndarray:
    """Full rate of (pe, ke, oe) including the target-motion contribution.

    ``target_twist`` is the 6-twist of the trajectory frame whose axes stay
    aligned with the base frame, so its first three entries are the target
    velocity in the base frame.  The auxiliary errors depend on the target
    only through that origin velocity; the angular part has no effect (its
    factorization columns are identically zero).
    """
    if xi is None:
        xi = xi_matrix(te, aux)
    target_twist = np.asarray(target_twist, dtype=float)
    return edot_from_xi(xi, state.rot, state.twist, target_twist[:3])


def lambda0(xi: XiMatrix) -> float:
    """Smallest eigenvalue of Xi J Xi^T with J = diag(1,0,1,1,1,1).

    J masks the unactuated lateral-force column; the result is >= 0 and
    vanishes only on the three singular error lines.
    """
    m = xi.matrix
    masked = m.copy()
    masked[:, 1] = 0.0
    a = masked @ m.T
    return max(0.0, float(np.linalg.eigvalsh(0.5 * (a + a.T))[0]))


def is_near_singular_line(te: TrackingError, tol: float) -> SingularLine:
    """Classify proximity of the error geometry to the three rank-loss lines.

    Distances are Euclidean distances of e (resp. l) to the named axis;
    the first line within ``tol`` wins, in the order below.
    """
    ex, ey, ez = te.e_body
    lx, ly, lz = te.e_lat
    if math.hypot(ex, ez) <= tol:
        return SingularLine.E_ALONG_Y
    if math.hypot(ey, ez) <= tol:
        return SingularLine.E_ALONG_X
    if math.hypot(lx, lz) <= tol:
        return SingularLine.LAT_ALONG_Y
    return SingularLine.NONE
