"""Rotation-group primitives: skew operator, Rodrigues exponential map, attitude integration.

Rotation matrices are plain (3, 3) float ndarrays whose columns are the body
axes expressed in the target frame.  All updates go through the exponential
map, so orthonormality is preserved to machine precision without explicit
re-orthonormalization.
"""

import math

import numpy as np


def skew(v) -> np.ndarray:
    """Skew-symmetric matrix S(v) with S(v) @ w == cross(v, w)."""
    x, y, z = v
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def rotation_exp(w) -> np.ndarray:
    """Exponential map so(3) -> SO(3) of the rotation vector w (axis * angle, rad).

    Rodrigues formula written out entrywise (R = I + a S + b S^2 with
    S^2 = w w^T - |w|^2 I), with a series expansion of the two scalar
    coefficients below |w| = 1e-4 to stay accurate for tiny steps.
    """
    x = float(w[0])
    y = float(w[1])
    z = float(w[2])
    th2 = x * x + y * y + z * z
    if th2 < 1e-8:
        a = 1.0 - th2 / 6.0 * (1.0 - th2 / 20.0)
        b = 0.5 * (1.0 - th2 / 12.0 * (1.0 - th2 / 30.0))
    else:
        th = math.sqrt(th2)
        a = math.sin(th) / th
        b = (1.0 - math.cos(th)) / th2
    r = np.empty((3, 3))
    bxy = b * x * y
    byz = b * y * z
    bxz = b * x * z
    r[0, 0] = 1.0 - b * (y * y + z * z)
    r[0, 1] = bxy - a * z
    r[0, 2] = bxz + a * y
    r[1, 0] = bxy + a * z
    r[1, 1] = 1.0 - b * (x * x + z * z)
    r[1, 2] = byz - a * x
    r[2, 0] = bxz - a * y
    r[2, 1] = byz + a * x
    r[2, 2] = 1.0 - b * (x * x + y * y)
    return r


def integrate_rotation(rot: np.ndarray, omega, dt: float) -> np.ndarray:
    """Advance attitude under constant body angular velocity: R -> R @ exp(S(omega * dt)).

    Exact for constant omega, hence composes additively in dt.
    """
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    omega = np.asarray(omega, dtype=float)
    return rot @ rotation_exp(omega * dt)


def orthonormality_defect(rot: np.ndarray) -> float:
    """Frobenius norm of R^T R - I; zero for an exact rotation matrix."""
    r = np.asarray(rot, dtype=float)
    return float(np.linalg.norm(r.T @ r - np.eye(3)))


def is_rotation(rot: np.ndarray, tol: float = 1e-9) -> bool:
    """True when R is orthonormal with det(R) = 1 within tol."""
    r = np.asarray(rot, dtype=float)
    if r.shape != (3, 3):
        return False
    return orthonormality_defect(r) < tol and abs(np.linalg.det(r) - 1.0) < tol
