"""Command line front end: tracking simulation, IK training, clustering
comparison, and dynamics self-checks.

Configuration precedence is built-in defaults, then an optional flat
key=value config file (keys namespaced like ``robot.l1``, ``aco.rho``,
``ctrl.k``, ``sim.dt``), then command-line flags.  The environment variable
``ACORBFN_SEED`` provides the seed when neither a flag nor the config file
does.  Every run writes a manifest listing all emitted files plus a
``config.resolved`` snapshot that can be fed back through ``--config`` to
reproduce the run byte for byte.  Files are written atomically.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import __version__, aco, controller, dynamics, rbfn, sim

DEFAULTS = {
    "seed": 0,
    "robot.l1": 1.0, "robot.l2": 0.8, "robot.l3": 0.6,
    "robot.m1": 1.0, "robot.m2": 0.8, "robot.m3": 0.5,
    "robot.g": 9.8, "robot.viscous": 12.0, "robot.coulomb": 0.2,
    "robot.f_m": 0.9, "robot.f_c": 0.8, "robot.f_g": 0.85,
    "ctrl.lambda1": 5.0, "ctrl.lambda2": 5.0, "ctrl.lambda3": 5.0,
    "ctrl.k": 15.0, "ctrl.epsilon": 0.05, "ctrl.alpha": 0.5,
    "ctrl.hidden": 15, "ctrl.compensation": True, "ctrl.input_mode": "error",
    "sim.dt": 1e-3, "sim.t_end": 10.0,
    "sim.friction": True, "sim.disturbance": True,
    "sim.coriolis_mode": "symmetric",
    "sim.payload_mass": 10.0, "sim.payload_on": 1.0, "sim.payload_off": 4.0,
    "aco.rho": 0.9, "aco.q": 100.0, "aco.nc_max": 100, "aco.ants": 20,
    "aco.tau0": 1.0, "aco.k": 5,
    "train.lr": 0.1, "train.error_target": 1e-3,
    "train.max_hidden": 150, "train.max_epochs": 500,
    "ik.n_train": 1000, "ik.n_test": 200, "ik.centers": 40,
    "cmp.seeds": 20, "cmp.points": 300, "cmp.blobs": 5,
    "cmp.blob_sigma": 0.5, "cmp.separation": 8.0, "cmp.k": 5,
    "cmp.epochs": 40, "cmp.lr": 0.1,
}

_BOOL_KEYS = {"ctrl.compensation", "sim.friction", "sim.disturbance"}


class ConfigError(Exception):
    pass


def _coerce(key, raw):
    if key not in DEFAULTS:
        raise ConfigError(f"unknown config key {key!r}")
    default = DEFAULTS[key]
    if key in _BOOL_KEYS or isinstance(default, bool):
        if isinstance(raw, bool):
            return raw
        if str(raw).lower() in ("1", "true", "yes", "on"):
            return True
        if str(raw).lower() in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"{key}: expected a boolean, got {raw!r}")
    if isinstance(default, int):
        try:
            return int(raw)
        except ValueError as exc:
            raise ConfigError(f"{key}: expected an integer, got {raw!r}") from exc
    if isinstance(default, float):
        try:
            return float(raw)
        except ValueError as exc:
            raise ConfigError(f"{key}: expected a number, got {raw!r}") from exc
    return str(raw)


def load_config_file(path) -> dict:
    cfg = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        cfg[key.strip()] = _coerce(key.strip(), value.strip())
    return cfg


def resolve_config(args, flag_map: dict) -> dict:
    """defaults < config file < flags; the seed falls back to ACORBFN_SEED."""
    cfg = dict(DEFAULTS)
    seed_from_file = False
    if getattr(args, "config", None):
        file_cfg = load_config_file(args.config)
        seed_from_file = "seed" in file_cfg
        cfg.update(file_cfg)
    for key, attr in flag_map.items():
        val = getattr(args, attr, None)
        if val is not None:
            cfg[key] = _coerce(key, val)
    if getattr(args, "seed", None) is None and not seed_from_file:
        env = os.environ.get("ACORBFN_SEED")
        if env is not None:
            cfg["seed"] = _coerce("seed", env)
    return cfg


def _robot(cfg) -> dynamics.RobotParams:
    return dynamics.RobotParams(
        l1=cfg["robot.l1"], l2=cfg["robot.l2"], l3=cfg["robot.l3"],
        m1=cfg["robot.m1"], m2=cfg["robot.m2"], m3=cfg["robot.m3"],
        g=cfg["robot.g"],
        viscous_coeff=cfg["robot.viscous"], coulomb_coeff=cfg["robot.coulomb"],
        estimate_factors=(cfg["robot.f_m"], cfg["robot.f_c"], cfg["robot.f_g"]),
    )


def _ctrl(cfg) -> controller.ControllerConfig:
    return controller.ControllerConfig(
        lambda_gains=(cfg["ctrl.lambda1"], cfg["ctrl.lambda2"], cfg["ctrl.lambda3"]),
        robust_gain=cfg["ctrl.k"],
        boundary_layer=cfg["ctrl.epsilon"],
        adaptation_gain=cfg["ctrl.alpha"],
        rbf_hidden_count=cfg["ctrl.hidden"],
        compensation_enabled=cfg["ctrl.compensation"],
        input_mode=cfg["ctrl.input_mode"],
    )


def _sim(cfg) -> sim.SimConfig:
    payload = None
    if cfg["sim.payload_mass"] > 0.0:
        payload = dynamics.PayloadSchedule(
            cfg["sim.payload_mass"], cfg["sim.payload_on"], cfg["sim.payload_off"]
        )
    return sim.SimConfig(
        dt=cfg["sim.dt"], t_end=cfg["sim.t_end"], payload=payload,
        disturbance_enabled=cfg["sim.disturbance"],
        friction_enabled=cfg["sim.friction"],
        coriolis_mode=cfg["sim.coriolis_mode"],
        rng_seed=cfg["seed"],
    )


def _aco(cfg, k_key: str) -> aco.AcoConfig:
    return aco.AcoConfig(
        ant_count=cfg["aco.ants"], evaporation=cfg["aco.rho"], deposit=cfg["aco.q"],
        max_iterations=cfg["aco.nc_max"], centers_to_pick=cfg[k_key],
        initial_pheromone=cfg["aco.tau0"], rng_seed=cfg["seed"],
    )


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _config_text(cfg) -> str:
    return "".join(f"{k}={cfg[k]}\n" for k in sorted(cfg))


def _write_manifest(out_dir: Path, subcommand: str, cfg: dict, outputs, extra=None) -> None:
    manifest = {
        "subcommand": subcommand,
        "artifact_version": __version__,
        "seed": cfg["seed"],
        "config": {k: cfg[k] for k in sorted(cfg)},
        "outputs": [str(p.relative_to(out_dir)) for p in outputs],
    }
    if extra:
        manifest.update(extra)
    write_atomic(out_dir / "manifest.json", json.dumps(manifest, indent=2) + "\n")


def _svg_timeseries(t, series, labels, title, width=640, height=320) -> str:
    lo = min(float(np.min(s)) for s in series)
    hi = max(float(np.max(s)) for s in series)
    if hi - lo < 1e-12:
        hi, lo = hi + 0.5, lo - 0.5
    mx, my = 55, 25
    pw, ph = width - mx - 15, height - my - 35
    colors = ["#1f77b4", "#d62728", "#2ca02c"]

    def sx(tv):
        return mx + pw * (tv - t[0]) / max(t[-1] - t[0], 1e-12)

    def sy(v):
        return my + ph * (1.0 - (v - lo) / (hi - lo))

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.0f}" y="16" text-anchor="middle" font-size="13">{title}</text>',
        f'<line x1="{mx}" y1="{my}" x2="{mx}" y2="{my + ph}" stroke="black"/>',
        f'<line x1="{mx}" y1="{my + ph}" x2="{mx + pw}" y2="{my + ph}" stroke="black"/>',
        f'<text x="{mx - 4}" y="{my + 8}" text-anchor="end" font-size="10">{hi:.3g}</text>',
        f'<text x="{mx - 4}" y="{my + ph}" text-anchor="end" font-size="10">{lo:.3g}</text>',
        f'<text x="{mx}" y="{height - 6}" font-size="10">{t[0]:.3g}</text>',
        f'<text x="{mx + pw}" y="{height - 6}" text-anchor="end" font-size="10">{t[-1]:.3g} s</text>',
    ]
    step = max(1, len(t) // 2000)
    for s_idx, (s, label) in enumerate(zip(series, labels)):
        pts = " ".join(f"{sx(t[i]):.2f},{sy(s[i]):.2f}" for i in range(0, len(t), step))
        color = colors[s_idx % len(colors)]
        dash = ' stroke-dasharray="5,4"' if label.endswith("desired") else ""
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.2"{dash}/>')
        parts.append(
            f'<text x="{mx + pw - 4}" y="{my + 14 + 13 * s_idx}" text-anchor="end" '
            f'font-size="10" fill="{color}">{label}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _write_plots(out_dir: Path, trace: sim.SimTrace) -> list:
    paths = []
    panels = []
    for j in range(3):
        panels.append((f"pos{j + 1}.svg", [trace.q[:, j], trace.qd[:, j]],
                       [f"q{j + 1}", f"q{j + 1} desired"], f"position of joint {j + 1}"))
    for j in range(3):
        panels.append((f"err{j + 1}.svg", [trace.e[:, j]], [f"e{j + 1}"],
                       f"position error of joint {j + 1}"))
    for j in range(3):
        panels.append((f"tau{j + 1}.svg", [trace.tau[:, j]], [f"tau{j + 1}"],
                       f"control input of joint {j + 1}"))
    for name, series, labels, title in panels:
        path = out_dir / "plots" / name
        write_atomic(path, _svg_timeseries(trace.t, series, labels, title))
        paths.append(path)
    return paths


def cmd_simulate(args) -> int:
    cfg = resolve_config(args, {
        "sim.dt": "dt", "sim.t_end": "t_end", "seed": "seed",
        "ctrl.compensation": "compensation", "sim.friction": "friction",
        "sim.disturbance": "disturbance", "sim.coriolis_mode": "coriolis_mode",
        "sim.payload_mass": "payload_mass", "sim.payload_on": "payload_on",
        "sim.payload_off": "payload_off",
        "ctrl.lambda1": "lambda1", "ctrl.lambda2": "lambda2", "ctrl.lambda3": "lambda3",
        "ctrl.k": "robust_gain", "ctrl.epsilon": "boundary_layer",
        "ctrl.alpha": "adapt_gain", "ctrl.hidden": "hidden",
        "ctrl.input_mode": "input_mode",
        "robot.f_m": "f_m", "robot.f_c": "f_c", "robot.f_g": "f_g",
    })
    out_dir = Path(args.out_dir)
    robot, ctrl_cfg, sim_cfg = _robot(cfg), _ctrl(cfg), _sim(cfg)

    aborted = False
    try:
        trace, metrics = sim.run_simulation(robot, ctrl_cfg, sim_cfg)
    except sim.SimulationAborted as exc:
        trace, metrics, aborted = exc.trace, None, True
        print(f"simulation aborted: {exc}", file=sys.stderr)

    outputs = []
    trace_path = out_dir / "trace.csv"
    write_atomic(trace_path, trace.to_csv())
    outputs.append(trace_path)
    if metrics is not None:
        for name, text in (("metrics.txt", metrics.to_text()), ("metrics.csv", metrics.to_csv())):
            path = out_dir / name
            write_atomic(path, text)
            outputs.append(path)
    if args.plot:
        outputs.extend(_write_plots(out_dir, trace))
    cfg_path = out_dir / "config.resolved"
    write_atomic(cfg_path, _config_text(cfg))
    outputs.append(cfg_path)
    _write_manifest(out_dir, "simulate", cfg, outputs, {"aborted": aborted})
    if metrics is not None:
        rms = ",".join(format(v, ".6g") for v in metrics.settling_rms)
        print(f"simulate: {trace.t.shape[0]} rows, final-half rms per joint = {rms}")
    return 3 if aborted else 0


def cmd_train_ik(args) -> int:
    cfg = resolve_config(args, {
        "ik.n_train": "n_train", "ik.n_test": "n_test", "ik.centers": "centers",
        "train.lr": "lr", "train.error_target": "error_target",
        "train.max_hidden": "max_hidden", "train.max_epochs": "epochs",
        "seed": "seed",
        "aco.rho": "rho", "aco.q": "q_deposit", "aco.nc_max": "nc_max",
        "aco.ants": "ants", "aco.tau0": "tau0",
    })
    if cfg["ik.centers"] < 1:
        raise ConfigError("ik.centers must be >= 1")
    if cfg["train.max_hidden"] < cfg["ik.centers"]:
        raise ConfigError("train.max_hidden must be >= ik.centers")
    out_dir = Path(args.out_dir)
    robot = _robot(cfg)
    aco_cfg = _aco(cfg, "ik.centers")
    train_cfg = rbfn.TrainConfig(
        learning_rate=cfg["train.lr"], error_target=cfg["train.error_target"],
        max_hidden=cfg["train.max_hidden"], max_epochs=cfg["train.max_epochs"],
        rng_seed=cfg["seed"],
    )
    report = sim.run_ik_experiment(
        robot, aco_cfg, train_cfg,
        n_train=cfg["ik.n_train"], n_test=cfg["ik.n_test"], rng_seed=cfg["seed"],
    )
    outputs = []
    for name, text in (
        ("ik_report.csv", report.to_csv()),
        ("network.txt", rbfn.to_text(report.net)),
        ("config.resolved", _config_text(cfg)),
    ):
        path = out_dir / name
        write_atomic(path, text)
        outputs.append(path)
    _write_manifest(out_dir, "train-ik", cfg, outputs, {
        "mean_joint_error": report.mean_joint_error,
        "mean_cartesian_error": report.mean_cartesian_error,
        "hidden_count": report.net.hidden_count,
    })
    print(
        f"train-ik: hidden={report.net.hidden_count} "
        f"mean_joint_error={report.mean_joint_error:.6g} "
        f"mean_cartesian_error={report.mean_cartesian_error:.6g}"
    )
    return 0


def cmd_compare(args) -> int:
    cfg = resolve_config(args, {
        "cmp.seeds": "seeds", "cmp.points": "points", "cmp.blobs": "blobs",
        "cmp.blob_sigma": "blob_sigma", "cmp.separation": "separation",
        "cmp.k": "k", "cmp.epochs": "epochs", "cmp.lr": "lr", "seed": "seed",
        "aco.rho": "rho", "aco.q": "q_deposit", "aco.nc_max": "nc_max",
        "aco.ants": "ants", "aco.tau0": "tau0",
    })
    if cfg["cmp.seeds"] < 1:
        raise ConfigError("cmp.seeds must be >= 1")
    out_dir = Path(args.out_dir)
    dataset, targets = aco.make_blob_benchmark(
        n_points=cfg["cmp.points"], n_blobs=cfg["cmp.blobs"],
        blob_sigma=cfg["cmp.blob_sigma"], separation=cfg["cmp.separation"],
        rng_seed=cfg["seed"],
    )
    aco_cfg = _aco(cfg, "cmp.k")
    train_cfg = rbfn.TrainConfig(
        learning_rate=cfg["cmp.lr"], error_target=1e-9,
        max_hidden=cfg["cmp.k"], max_epochs=cfg["cmp.epochs"], rng_seed=cfg["seed"],
    )
    report = aco.compare_clustering(
        dataset, cfg["cmp.k"], aco_cfg, cfg["cmp.seeds"], targets, train_cfg
    )
    summary = (
        f"# ties count as a non-loss for the ant-colony method\n"
        f"n_seeds={len(report.rows)}\n"
        f"mean_E_aco={report.mean_e_aco:.17g}\n"
        f"mean_E_kmeans={report.mean_e_kmeans:.17g}\n"
        f"aco_nonloss_rate={report.aco_nonloss_rate:.17g}\n"
    )
    outputs = []
    for name, text in (
        ("comparison.csv", aco.comparison_csv(report)),
        ("summary.txt", summary),
        ("config.resolved", _config_text(cfg)),
    ):
        path = out_dir / name
        write_atomic(path, text)
        outputs.append(path)
    _write_manifest(out_dir, "compare", cfg, outputs, {
        "mean_E_aco": report.mean_e_aco,
        "mean_E_kmeans": report.mean_e_kmeans,
        "aco_nonloss_rate": report.aco_nonloss_rate,
    })
    print(
        f"compare: mean_E_aco={report.mean_e_aco:.6g} "
        f"mean_E_kmeans={report.mean_e_kmeans:.6g} "
        f"aco_nonloss_rate={report.aco_nonloss_rate:.3g} (ties count as ACO non-loss)"
    )
    return 0


def _check_dynamics_report(robot: dynamics.RobotParams, payload: float, n_samples: int, seed: int):
    rng = np.random.default_rng(seed)
    checks = []

    qs = np.column_stack([
        rng.uniform(-np.pi, np.pi, n_samples),
        rng.uniform(-np.pi, np.pi, n_samples),
        rng.uniform(-1.0, 1.0, n_samples),
    ])
    sym_ok = all(
        np.array_equal(m := dynamics.mass_matrix(robot, q, payload), m.T) for q in qs
    )
    checks.append(("mass-matrix-symmetry", sym_ok, True, ""))

    pd_ok = True
    for q2 in np.linspace(-np.pi / 2, np.pi / 2, 181):
        m = dynamics.mass_matrix(robot, np.array([0.0, q2, 0.0]), payload)
        try:
            np.linalg.cholesky(m)
        except np.linalg.LinAlgError:
            pd_ok = False
            break
    checks.append((
        "positive-definite (|q2| <= pi/2)", pd_ok, True,
        f"payload={payload:g} kg",
    ))

    def passivity_residual(mode):
        worst = 0.0
        h = 1e-6
        for _ in range(200):
            q = rng.uniform(-1.2, 1.2, 3)
            qd = rng.uniform(-1.0, 1.0, 3)
            c = dynamics.coriolis_matrix(robot, q, qd, mode=mode, payload_mass=payload)
            m_plus = dynamics.mass_matrix(robot, q + h * qd, payload)
            m_minus = dynamics.mass_matrix(robot, q - h * qd, payload)
            mdot = (m_plus - m_minus) / (2.0 * h)
            worst = max(worst, abs(float(qd @ (mdot - 2.0 * c) @ qd)))
        return worst

    worst_c = passivity_residual("christoffel")
    checks.append((
        "christoffel-passivity", worst_c < 1e-8, True,
        f"max |qd'(dM/dt - 2C)qd| = {worst_c:.3e}",
    ))
    worst_s = passivity_residual("symmetric")
    checks.append((
        "symmetric-mode-passivity", worst_s < 1e-8, False,
        f"max residual {worst_s:.3e}; expected to fail, the symmetric "
        "coupling form does not satisfy the skew-symmetry identity",
    ))

    drift = sim.unforced_energy_drift(robot, t_end=10.0, dt=1e-3)
    checks.append(("energy-conservation", drift < 1e-6, True, f"relative drift {drift:.3e}"))
    return checks


def cmd_check_dynamics(args) -> int:
    cfg = resolve_config(args, {"seed": "seed"})
    payload = args.payload if args.payload is not None else 0.0
    n_samples = args.samples
    out_dir = Path(args.out_dir)
    robot = _robot(cfg)
    checks = _check_dynamics_report(robot, payload, n_samples, cfg["seed"])

    lines = []
    ok = True
    for name, passed, required, note in checks:
        status = "PASS" if passed else "FAIL"
        req = "required" if required else "informational"
        suffix = f" ({note})" if note else ""
        lines.append(f"{status} {name} [{req}]{suffix}")
        if required and not passed:
            ok = False
    text = "\n".join(lines) + "\n"
    print(text, end="")

    outputs = []
    for name, body in (("dynamics_report.txt", text), ("config.resolved", _config_text(cfg))):
        path = out_dir / name
        write_atomic(path, body)
        outputs.append(path)
    _write_manifest(out_dir, "check-dynamics", cfg, outputs, {"all_required_passed": ok})
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="acorbfn",
        description="Ant-colony-optimized RBF networks: SCARA tracking control, "
                    "inverse-kinematics learning, and clustering comparison.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    fmt = argparse.ArgumentDefaultsHelpFormatter

    p = sub.add_parser("simulate", formatter_class=fmt,
                       help="closed-loop tracking simulation with trace/metrics export")
    p.add_argument("--config", help="flat key=value config file")
    p.add_argument("--out-dir", default="runs/simulate", help="output directory")
    p.add_argument("--dt", type=float, default=None, help=f"step size [{DEFAULTS['sim.dt']}]")
    p.add_argument("--t-end", type=float, default=None, help=f"duration [{DEFAULTS['sim.t_end']}]")
    p.add_argument("--seed", type=int, default=None, help=f"rng seed [{DEFAULTS['seed']}]")
    p.add_argument("--no-compensation", dest="compensation", action="store_const", const=False,
                   default=None, help="disable the adaptive RBF term [enabled]")
    p.add_argument("--no-friction", dest="friction", action="store_const", const=False,
                   default=None, help="disable plant friction [enabled]")
    p.add_argument("--no-disturbance", dest="disturbance", action="store_const", const=False,
                   default=None, help="disable the torque disturbance [enabled]")
    p.add_argument("--coriolis-mode", choices=dynamics.CORIOLIS_MODES, default=None,
                   help=f"plant coupling form [{DEFAULTS['sim.coriolis_mode']}]")
    p.add_argument("--payload-mass", type=float, default=None,
                   help=f"carried mass, 0 disables [{DEFAULTS['sim.payload_mass']}]")
    p.add_argument("--payload-on", type=float, default=None,
                   help=f"payload window start [{DEFAULTS['sim.payload_on']}]")
    p.add_argument("--payload-off", type=float, default=None,
                   help=f"payload window end [{DEFAULTS['sim.payload_off']}]")
    p.add_argument("--factors", default=None, metavar="FM,FC,FG",
                   help="model estimate factors [0.9,0.8,0.85]")
    p.add_argument("--lambda1", type=float, default=None, help=f"surface gain 1 [{DEFAULTS['ctrl.lambda1']}]")
    p.add_argument("--lambda2", type=float, default=None, help=f"surface gain 2 [{DEFAULTS['ctrl.lambda2']}]")
    p.add_argument("--lambda3", type=float, default=None, help=f"surface gain 3 [{DEFAULTS['ctrl.lambda3']}]")
    p.add_argument("--robust-gain", type=float, default=None, help=f"switching gain [{DEFAULTS['ctrl.k']}]")
    p.add_argument("--boundary-layer", type=float, default=None,
                   help=f"saturation layer width [{DEFAULTS['ctrl.epsilon']}]")
    p.add_argument("--adapt-gain", type=float, default=None,
                   help=f"per-sample weight adaptation rate [{DEFAULTS['ctrl.alpha']}]")
    p.add_argument("--hidden", type=int, default=None,
                   help=f"compensator hidden units [{DEFAULTS['ctrl.hidden']}]")
    p.add_argument("--input-mode", choices=controller.INPUT_MODES, default=None,
                   help=f"compensator input signals [{DEFAULTS['ctrl.input_mode']}]")
    p.add_argument("--plot", action="store_true",
                   help="emit SVG panels: positions, errors, control inputs [off]")
    p.set_defaults(func=cmd_simulate, f_m=None, f_c=None, f_g=None)

    p = sub.add_parser("train-ik", formatter_class=fmt,
                       help="learn the inverse-kinematics map and score held-out points")
    p.add_argument("--config", help="flat key=value config file")
    p.add_argument("--out-dir", default="runs/train-ik", help="output directory")
    p.add_argument("--n-train", type=int, default=None, help=f"training samples [{DEFAULTS['ik.n_train']}]")
    p.add_argument("--n-test", type=int, default=None, help=f"held-out samples [{DEFAULTS['ik.n_test']}]")
    p.add_argument("--centers", type=int, default=None,
                   help=f"initial ant-selected centers [{DEFAULTS['ik.centers']}]")
    p.add_argument("--lr", type=float, default=None, help=f"per-sample learning rate [{DEFAULTS['train.lr']}]")
    p.add_argument("--error-target", type=float, default=None,
                   help=f"training error target [{DEFAULTS['train.error_target']}]")
    p.add_argument("--max-hidden", type=int, default=None,
                   help=f"hidden-layer growth cap [{DEFAULTS['train.max_hidden']}]")
    p.add_argument("--epochs", type=int, default=None, help=f"epoch cap [{DEFAULTS['train.max_epochs']}]")
    p.add_argument("--seed", type=int, default=None, help=f"rng seed [{DEFAULTS['seed']}]")
    p.add_argument("--rho", type=float, default=None, help=f"pheromone evaporation [{DEFAULTS['aco.rho']}]")
    p.add_argument("--q-deposit", type=float, default=None, help=f"deposit constant [{DEFAULTS['aco.q']}]")
    p.add_argument("--nc-max", type=int, default=None, help=f"search iteration cap [{DEFAULTS['aco.nc_max']}]")
    p.add_argument("--ants", type=int, default=None, help=f"ants per iteration [{DEFAULTS['aco.ants']}]")
    p.add_argument("--tau0", type=float, default=None, help=f"initial pheromone [{DEFAULTS['aco.tau0']}]")
    p.set_defaults(func=cmd_train_ik)

    p = sub.add_parser("compare", formatter_class=fmt,
                       help="ant-colony vs k-means center selection on the blob benchmark")
    p.add_argument("--config", help="flat key=value config file")
    p.add_argument("--out-dir", default="runs/compare", help="output directory")
    p.add_argument("--seeds", type=int, default=None, help=f"number of paired runs [{DEFAULTS['cmp.seeds']}]")
    p.add_argument("--points", type=int, default=None, help=f"benchmark points [{DEFAULTS['cmp.points']}]")
    p.add_argument("--blobs", type=int, default=None, help=f"gaussian blobs [{DEFAULTS['cmp.blobs']}]")
    p.add_argument("--blob-sigma", type=float, default=None, help=f"blob spread [{DEFAULTS['cmp.blob_sigma']}]")
    p.add_argument("--separation", type=float, default=None,
                   help=f"minimum blob gap [{DEFAULTS['cmp.separation']}]")
    p.add_argument("--k", type=int, default=None, help=f"centers to select [{DEFAULTS['cmp.k']}]")
    p.add_argument("--epochs", type=int, default=None, help=f"weight-training epochs [{DEFAULTS['cmp.epochs']}]")
    p.add_argument("--lr", type=float, default=None, help=f"per-sample learning rate [{DEFAULTS['cmp.lr']}]")
    p.add_argument("--seed", type=int, default=None, help=f"base rng seed [{DEFAULTS['seed']}]")
    p.add_argument("--rho", type=float, default=None, help=f"pheromone evaporation [{DEFAULTS['aco.rho']}]")
    p.add_argument("--q-deposit", type=float, default=None, help=f"deposit constant [{DEFAULTS['aco.q']}]")
    p.add_argument("--nc-max", type=int, default=None, help=f"search iteration cap [{DEFAULTS['aco.nc_max']}]")
    p.add_argument("--ants", type=int, default=None, help=f"ants per iteration [{DEFAULTS['aco.ants']}]")
    p.add_argument("--tau0", type=float, default=None, help=f"initial pheromone [{DEFAULTS['aco.tau0']}]")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("check-dynamics", formatter_class=fmt,
                       help="run the rigid-body model diagnostics")
    p.add_argument("--config", help="flat key=value config file")
    p.add_argument("--out-dir", default="runs/check-dynamics", help="output directory")
    p.add_argument("--payload", type=float, default=None, help="payload mass for the checks [0]")
    p.add_argument("--samples", type=int, default=10000, help="random poses for the symmetry check")
    p.add_argument("--seed", type=int, default=None, help=f"rng seed [{DEFAULTS['seed']}]")
    p.set_defaults(func=cmd_check_dynamics)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "factors", None):
        try:
            f_m, f_c, f_g = (float(v) for v in args.factors.split(","))
        except ValueError:
            print(f"error: --factors expects FM,FC,FG, got {args.factors!r}", file=sys.stderr)
            return 2
        args.f_m, args.f_c, args.f_g = f_m, f_c, f_g
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except sim.SimulationAborted as exc:
        print(f"error: simulation aborted: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
