"""Reference trajectories with analytic position, velocity and acceleration."""

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class LineTrajectory:
    """Straight line along the base x axis at constant speed."""

    speed: float = 0.1
    start: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def position(self, t: float) -> np.ndarray:
        return self.start + np.array([self.speed * t, 0.0, 0.0])

    def velocity(self, t: float) -> np.ndarray:
        return np.array([self.speed, 0.0, 0.0])

    def acceleration(self, t: float) -> np.ndarray:
        return np.zeros(3)


@dataclass(frozen=True)
class TanhSTrajectory:
    """Slow S-shaped climb-descent path: linear x, tanh lateral shift, sine height.

    All three components are zero at t = 0 by construction of the offsets.
    """

    x_speed: float = 0.05
    y_amp: float = 0.25
    y_rate: float = 0.075
    y_shift: float = 3.0
    z_amp: float = 0.1
    z_rate: float = 0.0393

    def position(self, t: float) -> np.ndarray:
        return np.array([
            self.x_speed * t,
            self.y_amp * (math.tanh(self.y_rate * t - self.y_shift) + math.tanh(self.y_shift)),
            -self.z_amp * (math.sin(self.z_rate * t - 0.5 * math.pi) + 1.0),
        ])

    def velocity(self, t: float) -> np.ndarray:
        sech2 = 1.0 / math.cosh(self.y_rate * t - self.y_shift) ** 2
        return np.array([
            self.x_speed,
            self.y_amp * self.y_rate * sech2,
            -self.z_amp * self.z_rate * math.cos(self.z_rate * t - 0.5 * math.pi),
        ])

    def acceleration(self, t: float) -> np.ndarray:
        arg = self.y_rate * t - self.y_shift
        sech2 = 1.0 / math.cosh(arg) ** 2
        return np.array([
            0.0,
            -2.0 * self.y_amp * self.y_rate**2 * sech2 * math.tanh(arg),
            self.z_amp * self.z_rate**2 * math.sin(self.z_rate * t - 0.5 * math.pi),
        ])


@dataclass(frozen=True)
class CustomTrajectory:
    """Wraps user callables; velocity/acceleration fall back to central differences."""

    position_fn: object
    velocity_fn: object = None
    acceleration_fn: object = None
    fd_step: float = 1e-6

    def position(self, t: float) -> np.ndarray:
        return np.asarray(self.position_fn(t), dtype=float)

    def velocity(self, t: float) -> np.ndarray:
        if self.velocity_fn is not None:
            return np.asarray(self.velocity_fn(t), dtype=float)
        h = self.fd_step
        return (self.position(t + h) - self.position(t - h)) / (2.0 * h)

    def acceleration(self, t: float) -> np.ndarray:
        if self.acceleration_fn is not None:
            return np.asarray(self.acceleration_fn(t), dtype=float)
        h = self.fd_step
        return (self.velocity(t + h) - self.velocity(t - h)) / (2.0 * h)
