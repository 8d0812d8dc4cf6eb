"""Scenario configuration files: INI-style sections, defaults, validation.

A config file has the sections below; every key is optional and falls back
to the documented default.  ``load_raw`` returns the effective string map
plus the set of defaulted keys (echoed into the run sidecar so nothing is
filled in silently), ``validate_raw`` returns human-readable diagnostics
for every violated invariant, and ``build_config`` produces the typed
:class:`~airship_smc.engine.ScenarioConfig`.
"""

import configparser
import io

import numpy as np

from .allocation import EngineLayout, ThrustCurve
from .controller import ControllerParams, ShapeViolation, validate_mass_estimate
from .engine import EDOT_MODES, MODES, POLICIES, AllocationSettings, InitialState, \
    ScenarioConfig
from .measurement import MeasurementModel
from .trajectory import LineTrajectory, TanhSTrajectory

TRAJ_KINDS = ("line_x", "tanh_s")

DEFAULTS = {
    "run": {
        "name": "scenario",
        "horizon": "600.0",
        "control_rate": "100.0",
        "plant_substeps": "1",
        "log_rate": "10.0",
        "seed": "0",
        "mode": "simulation",
        "singularity_policy": "hold",
        "singularity_tol": "1e-4",
        "edot_mode": "analytic",
        "edot_filter_tau": "0.05",
        "summary_t_min": "80.0",
    },
    "plant": {
        "mass_diag": "1, 1, 1, 1, 1, 1",
        "cp_diag": "1, 1, 1, 1, 1, 1",
    },
    "initial": {
        "position": "0, 0, 0",
        "rotation": "0, 0, 0",
        "velocity": "0, 0, 0, 0, 0, 0",
    },
    "controller": {
        "gains": "0.1, 0.1, 0.1",
        "offset": "0.2, 0.01, 0.01",
        "wrench_gains": "5, 0, 5, 5, 5, 5",
        "mass_estimate_scale": "10.0",
        "mass_estimate_diag": "",
        "boundary_width_p": "0.1",
        "boundary_width_k": "0.1",
        "boundary_width_o": "0.1",
        "reach_margin": "0.01",
        "switching": "sigmoid",
    },
    "trajectory": {
        "kind": "line_x",
        "speed": "0.1",
        "start": "0, 0, 0",
    },
    "measurement": {
        "noise_amplitude": "0.0",
        "noise_rate": "1.0",
        "rate": "100.0",
    },
    "allocation": {
        "engine_x": "0.8, 0.8, -0.8, -0.8",
        "engine_y": "0.6, -0.6, 0.6, -0.6",
        "engine_z": "0, 0, 0, 0",
        "lag": "0.1",
        "thrust_curve": "",
        "max_thrust": "2.0",
    },
}


class ConfigError(ValueError):
    """Raised for unparseable or structurally invalid config files."""


def _parser() -> configparser.ConfigParser:
    return configparser.ConfigParser(inline_comment_prefixes=("#",))


def load_raw(path_or_text, is_text: bool = False):
    """Read a config file into the effective {section: {key: str}} map.

    Returns (raw, filled) where ``filled`` maps "section.key" to the default
    value that was substituted for every key absent from the file.  Unknown
    sections or keys raise ConfigError with the offending name.
    """
    cp = _parser()
    try:
        if is_text:
            cp.read_file(io.StringIO(path_or_text))
        else:
            with open(path_or_text) as fh:
                cp.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"config parse error: {exc}") from exc

    raw = {}
    filled = {}
    for section, defaults in DEFAULTS.items():
        given = dict(cp[section]) if cp.has_section(section) else {}
        for key in given:
            if key not in defaults:
                raise ConfigError(f"unknown key [{section}] {key}")
        merged = {}
        for key, default in defaults.items():
            if key in given:
                merged[key] = given[key]
            else:
                merged[key] = default
                filled[f"{section}.{key}"] = default
        raw[section] = merged
    for section in cp.sections():
        if section not in DEFAULTS:
            raise ConfigError(f"unknown section [{section}]")
    return raw, filled


def _floats(text: str, n: int, what: str) -> np.ndarray:
    parts = [p for p in text.replace(",", " ").split() if p]
    try:
        vals = np.array([float(p) for p in parts])
    except ValueError as exc:
        raise ConfigError(f"{what}: cannot parse {text!r}") from exc
    if len(vals) != n:
        raise ConfigError(f"{what}: expected {n} values, got {len(vals)}")
    return vals


def _float(text: str, what: str) -> float:
    try:
        return float(text)
    except ValueError as exc:
        raise ConfigError(f"{what}: cannot parse {text!r}") from exc


def _int(text: str, what: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise ConfigError(f"{what}: cannot parse {text!r}") from exc


def _mass_estimate(raw) -> np.ndarray:
    c = raw["controller"]
    if c["mass_estimate_diag"].strip():
        return np.diag(_floats(c["mass_estimate_diag"], 6, "controller.mass_estimate_diag"))
    scale = _float(c["mass_estimate_scale"], "controller.mass_estimate_scale")
    mass = _floats(raw["plant"]["mass_diag"], 6, "plant.mass_diag")
    return np.diag(scale * mass)


def _trajectory(raw):
    t = raw["trajectory"]
    kind = t["kind"].strip()
    if kind == "line_x":
        return LineTrajectory(speed=_float(t["speed"], "trajectory.speed"),
                              start=_floats(t["start"], 3, "trajectory.start"))
    if kind == "tanh_s":
        return TanhSTrajectory()
    raise ConfigError(f"trajectory.kind must be one of {TRAJ_KINDS}, got {kind!r}")


def _thrust_curve(raw) -> ThrustCurve:
    a = raw["allocation"]
    path = a["thrust_curve"].strip()
    if path:
        return ThrustCurve.from_csv(path)
    return ThrustCurve(max_thrust=_float(a["max_thrust"], "allocation.max_thrust"))


def build_config(raw) -> ScenarioConfig:
    """Typed scenario from an effective raw map; raises on any invalid value."""
    r, c, m, a, i = (raw["run"], raw["controller"], raw["measurement"],
                     raw["allocation"], raw["initial"])
    controller = ControllerParams(
        gains=_floats(c["gains"], 3, "controller.gains"),
        offset=_floats(c["offset"], 3, "controller.offset"),
        wrench_gains=_floats(c["wrench_gains"], 6, "controller.wrench_gains"),
        mass_estimate=_mass_estimate(raw),
        boundary_widths=[_float(c[f"boundary_width_{n}"], f"controller.boundary_width_{n}")
                         for n in "pko"],
        reach_margin=_float(c["reach_margin"], "controller.reach_margin"),
        switching=c["switching"].strip(),
    )
    return ScenarioConfig(
        controller=controller,
        trajectory=_trajectory(raw),
        initial=InitialState(
            pos=_floats(i["position"], 3, "initial.position"),
            rotvec=_floats(i["rotation"], 3, "initial.rotation"),
            twist=_floats(i["velocity"], 6, "initial.velocity"),
        ),
        measurement=MeasurementModel(
            noise_amplitude=_float(m["noise_amplitude"], "measurement.noise_amplitude"),
            noise_rate=_float(m["noise_rate"], "measurement.noise_rate"),
            rate=_float(m["rate"], "measurement.rate"),
        ),
        allocation=AllocationSettings(
            layout=EngineLayout(
                x=_floats(a["engine_x"], 4, "allocation.engine_x"),
                y=_floats(a["engine_y"], 4, "allocation.engine_y"),
                z=_floats(a["engine_z"], 4, "allocation.engine_z"),
            ),
            curve=_thrust_curve(raw),
            lag=_float(a["lag"], "allocation.lag"),
        ),
        name=raw["run"]["name"].strip(),
        horizon=_float(r["horizon"], "run.horizon"),
        control_rate=_float(r["control_rate"], "run.control_rate"),
        plant_substeps=_int(r["plant_substeps"], "run.plant_substeps"),
        log_rate=_float(r["log_rate"], "run.log_rate"),
        seed=_int(r["seed"], "run.seed"),
        mode=r["mode"].strip(),
        singularity_policy=r["singularity_policy"].strip(),
        singularity_tol=_float(r["singularity_tol"], "run.singularity_tol"),
        edot_mode=r["edot_mode"].strip(),
        edot_filter_tau=_float(r["edot_filter_tau"], "run.edot_filter_tau"),
        summary_t_min=_float(r["summary_t_min"], "run.summary_t_min"),
        mass_diag=_floats(raw["plant"]["mass_diag"], 6, "plant.mass_diag"),
        cp_diag=_floats(raw["plant"]["cp_diag"], 6, "plant.cp_diag"),
    )


def validate_raw(raw) -> list:
    """Every violated invariant in the config, as human-readable diagnostics.

    Checks are field-by-field so one bad value does not mask the others;
    an empty list means the config builds and satisfies all admissibility
    conditions (including the mass-estimate stability margin).
    """
    problems = []

    def check(fn, *args):
        try:
            return fn(*args)
        except (ConfigError, ValueError) as exc:
            problems.append(str(exc))
            return None

    r = raw["run"]
    horizon = check(_float, r["horizon"], "run.horizon")
    if horizon is not None and horizon <= 0:
        problems.append(f"run.horizon must be > 0, got {horizon}")
    for key in ("control_rate", "log_rate"):
        v = check(_float, r[key], f"run.{key}")
        if v is not None and v <= 0:
            problems.append(f"run.{key} must be > 0, got {v}")
    sub = check(_int, r["plant_substeps"], "run.plant_substeps")
    if sub is not None and sub < 1:
        problems.append(f"run.plant_substeps must be >= 1, got {sub}")
    check(_int, r["seed"], "run.seed")
    if r["mode"].strip() not in MODES:
        problems.append(f"run.mode must be one of {MODES}, got {r['mode']!r}")
    if r["singularity_policy"].strip() not in POLICIES:
        problems.append(f"run.singularity_policy must be one of {POLICIES}")
    tol = check(_float, r["singularity_tol"], "run.singularity_tol")
    if tol is not None and tol < 0:
        problems.append("run.singularity_tol must be >= 0")
    if r["edot_mode"].strip() not in EDOT_MODES:
        problems.append(f"run.edot_mode must be one of {EDOT_MODES}")
    ft = check(_float, r["edot_filter_tau"], "run.edot_filter_tau")
    if ft is not None and ft <= 0:
        problems.append("run.edot_filter_tau must be > 0")

    mass = check(_floats, raw["plant"]["mass_diag"], 6, "plant.mass_diag")
    if mass is not None and (mass <= 0).any():
        problems.append(f"plant.mass_diag must be positive, got {mass}")
    cp = check(_floats, raw["plant"]["cp_diag"], 6, "plant.cp_diag")
    if cp is not None and (cp < 0).any():
        problems.append(f"plant.cp_diag must be non-negative, got {cp}")

    for key, n in (("position", 3), ("rotation", 3), ("velocity", 6)):
        v = check(_floats, raw["initial"][key], n, f"initial.{key}")
        if v is not None and not np.isfinite(v).all():
            problems.append(f"initial.{key} must be finite")

    c = raw["controller"]
    gains = check(_floats, c["gains"], 3, "controller.gains")
    if gains is not None and (gains <= 0).any():
        problems.append(f"controller gain matrix must be positive definite, got diag {gains}")
    offset = check(_floats, c["offset"], 3, "controller.offset")
    if offset is not None and not (
            offset[0] > 0 and 0 < offset[1] < 1 and 0 < offset[2] < 1):
        problems.append(
            f"controller.offset must lie in (0, inf) x (0, 1) x (0, 1), got {offset}")
    wg = check(_floats, c["wrench_gains"], 6, "controller.wrench_gains")
    if wg is not None:
        if wg[1] != 0.0:
            problems.append(
                f"controller.wrench_gains[1] (lateral force) must be exactly 0, got {wg[1]}")
        if (wg[[0, 2, 3, 4, 5]] <= 0).any():
            problems.append(
                f"controller.wrench_gains other than the lateral entry must be > 0, got {wg}")
    for n in "pko":
        w = check(_float, c[f"boundary_width_{n}"], f"controller.boundary_width_{n}")
        if w is not None and w <= 0:
            problems.append(f"controller.boundary_width_{n} must be > 0, got {w}")
    rm = check(_float, c["reach_margin"], "controller.reach_margin")
    if rm is not None and rm <= 0:
        problems.append("controller.reach_margin must be > 0")
    if c["switching"].strip() not in ("sign", "sigmoid"):
        problems.append(f"controller.switching must be sign or sigmoid, got {c['switching']!r}")
    mhat = check(_mass_estimate, raw)
    if mhat is not None and mass is not None and (mass > 0).all():
        try:
            margin = validate_mass_estimate(mhat, np.diag(mass))
            if margin < 0:
                problems.append(
                    "mass estimate fails the stability margin: "
                    f"min eig(M^-1 Mhat - 1) = {margin:.4g} < 0")
        except ShapeViolation as exc:
            problems.append(str(exc))
        if abs(np.linalg.det(mhat)) < 1e-12:
            problems.append("mass estimate must be invertible")

    check(_trajectory, raw)

    m = raw["measurement"]
    amp = check(_float, m["noise_amplitude"], "measurement.noise_amplitude")
    if amp is not None and amp < 0:
        problems.append("measurement.noise_amplitude must be >= 0")
    for key in ("noise_rate", "rate"):
        v = check(_float, m[key], f"measurement.{key}")
        if v is not None and v <= 0:
            problems.append(f"measurement.{key} must be > 0")

    a = raw["allocation"]
    xs = check(_floats, a["engine_x"], 4, "allocation.engine_x")
    ys = check(_floats, a["engine_y"], 4, "allocation.engine_y")
    zs = check(_floats, a["engine_z"], 4, "allocation.engine_z")
    if xs is not None and ys is not None and zs is not None:
        check(EngineLayout, xs, ys, zs)
    lag = check(_float, a["lag"], "allocation.lag")
    if lag is not None and lag < 0:
        problems.append("allocation.lag must be >= 0")
    check(_thrust_curve, raw)

    return problems


def sidecar_dict(raw, filled, seed, metrics=None, events=None, runtime=None) -> dict:
    """JSON-serializable run record: effective config, defaults, metrics."""
    out = {
        "name": raw["run"]["name"],
        "seed": int(seed),
        "config": raw,
        "defaults_filled": filled,
    }
    if metrics is not None:
        out["metrics"] = {k: (v if isinstance(v, int) else float(v))
                          for k, v in metrics.items()}
    if events is not None:
        out["singular_events"] = [{"t": float(t), "reason": reason} for t, reason in events]
    if runtime is not None:
        out["runtime_s"] = float(runtime)
    return out


def config_text(raw) -> str:
    """Render an effective raw map back to config-file text."""
    cp = _parser()
    for section, entries in raw.items():
        cp.add_section(section)
        for key, val in entries.items():
            cp.set(section, key, val)
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()
