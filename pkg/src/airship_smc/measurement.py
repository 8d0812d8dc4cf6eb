"""Pose measurement model: sampling rate, hold, and uniform position noise.

Mimics an external localization feed: position measurements are corrupted
by uniform noise in [-a, a]^3 that is redrawn at its own (slower) rate and
held constant in between; the measured pose itself updates at the
measurement rate with zero-order hold.  Orientation and velocity pass
through clean.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class MeasurementModel:
    noise_amplitude: float = 0.0   # m, half-width of the uniform position noise
    noise_rate: float = 1.0        # Hz, noise redraw rate
    rate: float = 100.0            # Hz, pose measurement rate
    hold: str = "zoh"

    def __post_init__(self):
        if self.noise_amplitude < 0:
            raise ValueError("noise_amplitude must be >= 0")
        if self.noise_rate <= 0 or self.rate <= 0:
            raise ValueError("rates must be > 0")
        if self.hold != "zoh":
            raise ValueError(f"unsupported hold policy {self.hold!r}")


class MeasurementSampler:
    """Stateful sampler driven by the control-loop step index.

    Rates are quantized to whole control periods.  The noise stream is
    drawn from ``rng`` even at zero amplitude so that runs with different
    amplitudes but equal seeds see identical draws.
    """

    def __init__(self, model: MeasurementModel, rng: np.random.Generator,
                 control_rate: float):
        self.model = model
        self.rng = rng
        self.meas_every = max(1, round(control_rate / model.rate))
        self.noise_every = max(1, round(control_rate / model.noise_rate))
        self._noise = np.zeros(3)
        self._held_pos = None
        self._held_rot = None

    def measure(self, step_index: int, pos: np.ndarray, rot: np.ndarray):
        """Measured (position, rotation) at control step ``step_index``."""
        a = self.model.noise_amplitude
        if step_index % self.noise_every == 0:
            self._noise = self.rng.uniform(-a, a, 3)
        if self._held_pos is None or step_index % self.meas_every == 0:
            self._held_pos = pos + self._noise
            self._held_rot = rot
        return self._held_pos, self._held_rot
