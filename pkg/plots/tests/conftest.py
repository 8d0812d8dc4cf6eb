import json
import math
import subprocess
import sys

import numpy as np
import pytest

COLUMNS = (
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


def write_synthetic_log(path, n=120, phase=0.0, sidecar=True):
    """A schema-conformant log with smooth synthetic signals."""
    t = np.arange(n) * 0.1
    rows = {c: np.zeros(n) for c in COLUMNS}
    rows["t"] = t
    rows["px"] = 0.1 * t
    rows["r11"] = rows["r22"] = rows["r33"] = np.ones(n)
    rows["u"] = 0.1 + 0.02 * np.sin(t + phase)
    rows["pdx"] = 0.1 * t + 0.2
    rows["exa"] = 0.2 + 0.05 * np.exp(-0.3 * t) * np.cos(t + phase)
    rows["eya"] = 0.01 * np.sin(0.5 * t + phase)
    rows["eza"] = 0.01 * np.cos(0.4 * t + phase)
    rows["pe"] = np.sqrt(rows["exa"]**2 + rows["eya"]**2 + rows["eza"]**2)
    rows["ke"] = 0.01 + 0.1 * np.exp(-0.2 * t)
    rows["oe"] = 0.01 + 0.08 * np.exp(-0.25 * t)
    rows["sp"] = 0.05 * np.exp(-0.3 * t)
    for k in range(1, 7):
        rows[f"tau{k}"] = 0.1 * k * np.exp(-0.1 * t) * np.sin(0.3 * k * t + phase)
    with open(path, "w") as fh:
        fh.write(",".join(COLUMNS) + "\n")
        mat = np.column_stack([rows[c] for c in COLUMNS])
        for row in mat:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")
    if sidecar:
        side = {"config": {"controller": {"offset": "0.2, 0.01, 0.01"}}}
        path.with_suffix(".json").write_text(json.dumps(side))
    return path


@pytest.fixture
def synthetic_log(tmp_path):
    return write_synthetic_log(tmp_path / "run.csv")


@pytest.fixture(scope="session")
def a1_log(tmp_path_factory):
    """The real simulation-study log, produced through the primary CLI."""
    out = tmp_path_factory.mktemp("a1")
    proc = subprocess.run(
        [sys.executable, "-m", "airship_smc.cli", "run", "sim_section4.cfg",
         "--out", str(out)],
        capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return out / "sim_section4.csv"
