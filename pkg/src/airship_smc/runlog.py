"""Structured closed-loop run logs: in-memory arrays, CSV schema, summary metrics.

The on-disk format is a single CSV with the fixed header below, one row
per log tick, written with shortest round-trip float formatting so that a
given run is bitwise reproducible.  Pose, twist and the position-error
columns are ground truth; pe/ke/oe, the sliding variable and the wrench
columns are the controller-side signals (computed from measurements, which
matters when measurement noise is enabled).  Engine command columns are
zero in pure-simulation runs.
"""

import math
from dataclasses import dataclass, field

import numpy as np

CSV_COLUMNS = (
    ["t", "px", "py", "pz"]
    + [f"r{i}{j}" for i in (1, 2, 3) for j in (1, 2, 3)]
    + ["u", "v", "w", "p", "q", "r"]
    + ["pdx", "pdy", "pdz"]
    + ["exa", "eya", "eza"]
    + ["pe", "ke", "oe"]
    + ["sp", "sk", "so"]
    + [f"tau{i}" for i in range(1, 7)]
    + [f"f{i}" for i in range(1, 5)]
    + [f"a{i}" for i in range(1, 5)]
)


class EmptyWindow(ValueError):
    """Raised when a summary window contains no log rows."""


@dataclass
class RunLog:
    """Time series of one closed-loop run at a uniform log rate."""

    t: np.ndarray              # (n,)
    pos: np.ndarray            # (n, 3) true position
    rot: np.ndarray            # (n, 9) row-major flattened attitude
    twist: np.ndarray          # (n, 6)
    target: np.ndarray         # (n, 3) reference position
    e_body: np.ndarray         # (n, 3) true body-frame tracking error
    aux: np.ndarray            # (n, 3) controller-side (pe, ke, oe)
    sigma: np.ndarray          # (n, 3) sliding variable
    tau: np.ndarray            # (n, 6) controller wrench
    realized: np.ndarray       # (n, 6) wrench applied to the plant (not in the CSV)
    thrust_cmd: np.ndarray     # (n, 4) engine command magnitudes
    tilt_cmd: np.ndarray       # (n, 4) engine tilt angles, rad
    events: list = field(default_factory=list)   # (t, line-name) singularity events

    def __len__(self) -> int:
        return len(self.t)

    def csv_matrix(self) -> np.ndarray:
        return np.column_stack([
            self.t, self.pos, self.rot, self.twist, self.target,
            self.e_body, self.aux, self.sigma, self.tau,
            self.thrust_cmd, self.tilt_cmd,
        ])

    def to_csv(self, path) -> None:
        mat = self.csv_matrix()
        with open(path, "w") as fh:
            fh.write(",".join(CSV_COLUMNS) + "\n")
            for row in mat:
                # repr of the Python float is the shortest exact round-trip,
                # which keeps logs bitwise reproducible.
                fh.write(",".join(repr(float(v)) for v in row) + "\n")

    @classmethod
    def from_csv(cls, path) -> "RunLog":
        with open(path) as fh:
            header = fh.readline().strip().split(",")
        if header != CSV_COLUMNS:
            raise ValueError(f"unexpected log schema in {path}: {header[:5]}...")
        mat = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        n = mat.shape[0]
        return cls(
            t=mat[:, 0], pos=mat[:, 1:4], rot=mat[:, 4:13], twist=mat[:, 13:19],
            target=mat[:, 19:22], e_body=mat[:, 22:25], aux=mat[:, 25:28],
            sigma=mat[:, 28:31], tau=mat[:, 31:37], realized=np.zeros((n, 6)),
            thrust_cmd=mat[:, 37:41], tilt_cmd=mat[:, 41:45],
        )


def summarize(log: RunLog, t_min: float = 80.0, offset: float = 0.2) -> dict:
    """Tracking metrics over t > t_min.

    Maximum absolute body-frame error components and error norm, the mean
    distance of pe from its commanded offset, and the peak sliding-variable
    norm.
    """
    mask = log.t > t_min
    if not mask.any():
        raise EmptyWindow(f"log ends at t = {log.t[-1] if len(log) else 'n/a'}, "
                          f"no rows after t_min = {t_min}")
    e = log.e_body[mask]
    norms = np.sqrt((e * e).sum(axis=1))
    sig = log.sigma[mask]
    return {
        "max_abs_ex": float(np.abs(e[:, 0]).max()),
        "max_abs_ey": float(np.abs(e[:, 1]).max()),
        "max_abs_ez": float(np.abs(e[:, 2]).max()),
        "max_norm_e": float(norms.max()),
        "mean_abs_pe_offset": float(np.abs(log.aux[mask, 0] - offset).mean()),
        "max_norm_sigma": float(np.sqrt((sig * sig).sum(axis=1)).max()),
        "singular_events": len(log.events),
    }


def all_finite(log: RunLog) -> bool:
    return bool(np.isfinite(log.csv_matrix()).all()) and math.isfinite(float(log.t[-1]))
