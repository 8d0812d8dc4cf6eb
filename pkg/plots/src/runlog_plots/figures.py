"""Figure builders for airship tracking run logs.

Consumes only the public artifacts of a run: the CSV log (fixed 45-column
schema) and, when available, the JSON sidecar next to it (for the
sliding-surface offset).  Five figure kinds:

    error_norm        |(pe, ke, oe) - offset| over time, log scale
    error_components  body-frame position error components
    controls          the six control wrench components
    velocities        body-frame linear and angular velocities
    phase             (e_n - offset_n) against its rate, n in {p, k, o}

Every kind accepts several logs; with more than one, runs are drawn gray
with one highlighted run in red.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

EXPECTED_COLUMNS = (
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

KINDS = ("error_norm", "error_components", "controls", "velocities", "phase")

GRAY = "0.65"
HIGHLIGHT = "tab:red"


class SchemaMismatch(ValueError):
    """Raised when a CSV does not carry the expected log schema."""


class EmptyLog(ValueError):
    """Raised when a log has a header but no data rows."""


@dataclass
class LogData:
    """One parsed run log: column name -> 1-D array, plus its origin path."""

    path: Path
    columns: dict

    def __getitem__(self, name: str) -> np.ndarray:
        return self.columns[name]

    @property
    def n(self) -> int:
        return len(self.columns["t"])


@dataclass(frozen=True)
class FigureSpec:
    """What to draw: kind, input logs, highlighted run, output path."""

    kind: str
    logs: tuple
    out: Path
    highlight: int = 0
    offset: tuple | None = None   # sliding-surface offset, for error_norm/phase

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if not self.logs:
            raise ValueError("at least one log is required")
        if not 0 <= self.highlight < len(self.logs):
            raise ValueError(f"highlight index {self.highlight} out of range")


def read_log(path) -> LogData:
    """Parse a run-log CSV, checking the schema by exact header comparison."""
    path = Path(path)
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        has_rows = bool(fh.readline().strip())
    if header != EXPECTED_COLUMNS:
        missing = [c for c in EXPECTED_COLUMNS if c not in header]
        extra = [c for c in header if c not in EXPECTED_COLUMNS]
        raise SchemaMismatch(
            f"{path} does not match the run-log schema: "
            f"missing {missing or 'none'}, unexpected {extra or 'none'}, "
            f"order must match exactly")
    if not has_rows:
        raise EmptyLog(f"{path} has no data rows")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return LogData(path=path,
                   columns={c: data[:, i] for i, c in enumerate(EXPECTED_COLUMNS)})


def sidecar_offset(csv_path) -> tuple | None:
    """Sliding-surface offset from the JSON sidecar next to a log, if present."""
    side = Path(csv_path).with_suffix(".json")
    if not side.is_file():
        return None
    try:
        cfg = json.loads(side.read_text())["config"]
        parts = cfg["controller"]["offset"].replace(",", " ").split()
        return tuple(float(p) for p in parts)
    except (KeyError, ValueError, json.JSONDecodeError):
        return None


def _series_style(i: int, n_logs: int, highlight: int) -> dict:
    if n_logs == 1:
        return {}
    if i == highlight:
        return {"color": HIGHLIGHT, "zorder": 3, "linewidth": 1.4}
    return {"color": GRAY, "zorder": 2, "linewidth": 0.9}


def _need_offset(spec: FigureSpec) -> np.ndarray:
    if spec.offset is not None:
        return np.asarray(spec.offset, dtype=float)
    found = sidecar_offset(spec.logs[0].path)
    if found is None:
        raise ValueError(
            f"kind {spec.kind!r} needs the sliding-surface offset; no JSON sidecar "
            f"next to {spec.logs[0].path}, pass it explicitly")
    return np.asarray(found, dtype=float)


def _fig_error_norm(spec: FigureSpec):
    offset = _need_offset(spec)
    fig, ax = plt.subplots(figsize=(7, 4))
    for i, log in enumerate(spec.logs):
        dev = np.column_stack([log["pe"], log["ke"], log["oe"]]) - offset
        ax.semilogy(log["t"], np.linalg.norm(dev, axis=1),
                    **_series_style(i, len(spec.logs), spec.highlight))
    ax.set_xlabel("t [s]")
    ax.set_ylabel("|(pe, ke, oe) - offset|")
    ax.grid(True, which="both", alpha=0.3)
    return fig


def _fig_error_components(spec: FigureSpec):
    fig, axes = plt.subplots(3, 1, figsize=(7, 7), sharex=True)
    labels = [("exa", "x error [m]"), ("eya", "y error [m]"), ("eza", "z error [m]")]
    for ax, (col, label) in zip(axes, labels):
        for i, log in enumerate(spec.logs):
            ax.plot(log["t"], log[col], **_series_style(i, len(spec.logs), spec.highlight))
        ax.set_ylabel(label)
        ax.grid(True, alpha=0.3)
    axes[-1].set_xlabel("t [s]")
    return fig


def _fig_controls(spec: FigureSpec):
    fig, axes = plt.subplots(3, 2, figsize=(9, 7), sharex=True)
    names = ["Fx [N]", "Fy [N]", "Fz [N]", "Nx [N m]", "Ny [N m]", "Nz [N m]"]
    for k, ax in enumerate(axes.ravel(order="F")):
        for i, log in enumerate(spec.logs):
            ax.plot(log["t"], log[f"tau{k + 1}"],
                    **_series_style(i, len(spec.logs), spec.highlight))
        ax.set_ylabel(names[k])
        ax.grid(True, alpha=0.3)
    for ax in axes[-1]:
        ax.set_xlabel("t [s]")
    return fig


def _fig_velocities(spec: FigureSpec):
    fig, axes = plt.subplots(3, 2, figsize=(9, 7), sharex=True)
    names = ["u [m/s]", "v [m/s]", "w [m/s]", "p [rad/s]", "q [rad/s]", "r [rad/s]"]
    cols = ["u", "v", "w", "p", "q", "r"]
    for k, ax in enumerate(axes.ravel(order="F")):
        for i, log in enumerate(spec.logs):
            ax.plot(log["t"], log[cols[k]],
                    **_series_style(i, len(spec.logs), spec.highlight))
        ax.set_ylabel(names[k])
        ax.grid(True, alpha=0.3)
    for ax in axes[-1]:
        ax.set_xlabel("t [s]")
    return fig


def _fig_phase(spec: FigureSpec):
    offset = _need_offset(spec)
    fig, axes = plt.subplots(1, 3, figsize=(11, 3.6))
    cols = ["pe", "ke", "oe"]
    units = [" [m]", "", ""]
    for k, ax in enumerate(axes):
        for i, log in enumerate(spec.logs):
            dev = log[cols[k]] - offset[k]
            rate = np.gradient(log[cols[k]], log["t"])
            ax.plot(dev, rate, **_series_style(i, len(spec.logs), spec.highlight))
        ax.set_xlabel(f"{cols[k]} - offset{units[k]}")
        ax.set_ylabel(f"d({cols[k]})/dt")
        ax.grid(True, alpha=0.3)
    fig.tight_layout()
    return fig


_BUILDERS = {
    "error_norm": _fig_error_norm,
    "error_components": _fig_error_components,
    "controls": _fig_controls,
    "velocities": _fig_velocities,
    "phase": _fig_phase,
}


def build_figure(spec: FigureSpec):
    """Matplotlib figure for a spec; caller owns closing it."""
    return _BUILDERS[spec.kind](spec)


def render(spec: FigureSpec) -> Path:
    """Draw the figure and write it to spec.out; returns the output path.

    Output is deterministic: identical inputs produce byte-identical files
    (version-dependent metadata is stripped).
    """
    fig = build_figure(spec)
    try:
        fig.savefig(spec.out, dpi=120, metadata={"Software": None})
    finally:
        plt.close(fig)
    return Path(spec.out)
