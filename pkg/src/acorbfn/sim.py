"""Closed-loop simulation of the SCARA plant under the adaptive controller,
plus the offline inverse-kinematics learning experiment.

Integration is classical fixed-step RK4 with the torque held constant over
the four stages (the controller runs at the integration rate).  Runs are
fully deterministic for a fixed seed: the trace, the learned compensator
and every derived metric reproduce bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from . import aco, controller, dynamics, rbfn


class EmptyWindow(ValueError):
    """Requested metrics window contains no trace rows."""


class SimulationAborted(Exception):
    """Integration hit a singular mass matrix; carries the partial trace."""

    def __init__(self, trace, cause):
        super().__init__(str(cause))
        self.trace = trace
        self.cause = cause


@dataclass(frozen=True)
class SimConfig:
    dt: float = 1e-3
    t_end: float = 10.0
    payload: dynamics.PayloadSchedule | None = dynamics.PayloadSchedule(10.0, 1.0, 4.0)
    disturbance_enabled: bool = True
    friction_enabled: bool = True
    coriolis_mode: str = "symmetric"
    rng_seed: int = 0

    def __post_init__(self):
        if self.dt <= 0.0:
            raise ValueError("dt must be positive")
        if self.t_end < self.dt:
            raise ValueError("t_end must be at least one step")
        if self.t_end / self.dt > 1e7:
            raise ValueError("step count exceeds the 1e7 guard")
        if self.coriolis_mode not in dynamics.CORIOLIS_MODES:
            raise ValueError(f"coriolis_mode must be one of {dynamics.CORIOLIS_MODES}")


@dataclass(frozen=True)
class SimTrace:
    """Uniformly spaced rows of desired/actual positions, errors, torques
    and sliding variables, with the full configuration echoed alongside."""

    t: np.ndarray
    qd: np.ndarray
    q: np.ndarray
    e: np.ndarray
    tau: np.ndarray
    s: np.ndarray
    config: dict
    aborted: bool = False

    CSV_HEADER = "t,qd1,qd2,qd3,q1,q2,q3,e1,e2,e3,tau1,tau2,tau3,s1,s2,s3"

    def to_csv(self) -> str:
        lines = [self.CSV_HEADER]
        for i in range(self.t.shape[0]):
            vals = np.concatenate([[self.t[i]], self.qd[i], self.q[i], self.e[i], self.tau[i], self.s[i]])
            lines.append(",".join(format(v, ".17g") for v in vals))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Metrics:
    window: tuple[float, float]
    rms: np.ndarray
    max_abs: np.ndarray
    settling_rms: np.ndarray

    def to_text(self) -> str:
        lines = [f"window_start={self.window[0]:.17g}", f"window_end={self.window[1]:.17g}"]
        for j in range(3):
            lines.append(f"rms_e{j + 1}={self.rms[j]:.17g}")
        for j in range(3):
            lines.append(f"max_abs_e{j + 1}={self.max_abs[j]:.17g}")
        for j in range(3):
            lines.append(f"settling_rms_e{j + 1}={self.settling_rms[j]:.17g}")
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        head = "window_start,window_end," + ",".join(
            f"{k}{j}" for k in ("rms_e", "max_abs_e", "settling_rms_e") for j in (1, 2, 3)
        )
        vals = [self.window[0], self.window[1], *self.rms, *self.max_abs, *self.settling_rms]
        return head + "\n" + ",".join(format(v, ".17g") for v in vals) + "\n"


def rk4_step(
    qddot_fn: Callable[[float, dynamics.JointState], np.ndarray],
    state: dynamics.JointState,
    t: float,
    dt: float,
) -> dynamics.JointState:
    """One classical Runge-Kutta step of (q, q̇) under q̈ = qddot_fn(t, state)."""
    if dt <= 0.0:
        raise ValueError("dt must be positive")

    def deriv(ti, q, qd):
        acc = qddot_fn(ti, dynamics.JointState(q, qd))
        return qd, acc

    k1q, k1v = deriv(t, state.q, state.qdot)
    k2q, k2v = deriv(t + dt / 2.0, state.q + dt / 2.0 * k1q, state.qdot + dt / 2.0 * k1v)
    k3q, k3v = deriv(t + dt / 2.0, state.q + dt / 2.0 * k2q, state.qdot + dt / 2.0 * k2v)
    k4q, k4v = deriv(t + dt, state.q + dt * k3q, state.qdot + dt * k3v)
    q_new = state.q + dt / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q)
    v_new = state.qdot + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
    return dynamics.JointState(q_new, v_new)


def _n_steps(sim_cfg: SimConfig) -> int:
    return int(np.floor(sim_cfg.t_end / sim_cfg.dt + 1e-9))


def _plant_qddot(robot, torque, sim_cfg):
    def fn(ti, st):
        return dynamics.forward_dynamics(
            robot,
            st,
            torque,
            t=ti,
            payload=sim_cfg.payload,
            mode=sim_cfg.coriolis_mode,
            friction_enabled=sim_cfg.friction_enabled,
            disturbance_enabled=sim_cfg.disturbance_enabled,
        )

    return fn


def _prepare_compensator(
    robot: dynamics.RobotParams, ctrl_cfg: controller.ControllerConfig, sim_cfg: SimConfig
) -> controller.ControlState:
    """Offline phase: pick compensator centers from a short uncompensated run.

    Simulates up to two seconds with compensation off, subsamples the
    compensator-input signal to at most ~200 candidates, selects
    ``rbf_hidden_count`` of them by ant-colony search, derives the shared
    width from their spread, and starts all output weights at zero.
    """
    pre_ctrl = replace(ctrl_cfg, compensation_enabled=False)
    pre_sim = replace(sim_cfg, t_end=min(2.0, sim_cfg.t_end))
    n = _n_steps(pre_sim)
    q_d0, qd_d0, _ = controller.desired_at(0.0)
    state = dynamics.JointState(q_d0, qd_d0)
    samples = [controller.compensator_input(state, 0.0, ctrl_cfg)]
    for i in range(n):
        t = i * pre_sim.dt
        tau = controller.control_law(robot, state, t, pre_ctrl, None)
        state = rk4_step(_plant_qddot(robot, tau, pre_sim), state, t, pre_sim.dt)
        samples.append(controller.compensator_input(state, (i + 1) * pre_sim.dt, ctrl_cfg))
    samples = np.asarray(samples)
    stride = max(1, samples.shape[0] // 200)
    candidates = samples[::stride]
    k = min(ctrl_cfg.rbf_hidden_count, candidates.shape[0])
    aco_cfg = aco.AcoConfig(centers_to_pick=k, rng_seed=sim_cfg.rng_seed)
    result = aco.run_aco_centers(candidates, aco_cfg)
    widths = rbfn.widths_from_spread(result.centers)
    net = rbfn.zero_weight_net(result.centers, widths, 3)
    # The configured adaptation gain is the per-sample rate of the online
    # weight rule (a constant in (0, 1)); the integrator-rate update law
    # multiplies by dt, so the continuous-time gain is rate / dt.
    return controller.ControlState(net, ctrl_cfg.adaptation_gain / sim_cfg.dt)


def run_simulation(
    robot: dynamics.RobotParams,
    ctrl_cfg: controller.ControllerConfig,
    sim_cfg: SimConfig,
) -> tuple[SimTrace, Metrics]:
    """Track the benchmark reference from an on-trajectory start.

    Per step: read the reference, compute the control torque, log a trace
    row, advance the plant one RK4 step, then adapt the compensator weights
    with the realized sliding variable.  Raises SimulationAborted (carrying
    the partial trace) if the plant pose turns singular.
    """
    n = _n_steps(sim_cfg)
    cstate = _prepare_compensator(robot, ctrl_cfg, sim_cfg) if ctrl_cfg.compensation_enabled else None

    q_d0, qd_d0, _ = controller.desired_at(0.0)
    state = dynamics.JointState(q_d0, qd_d0)
    lam = np.asarray(ctrl_cfg.lambda_gains)

    rows_t = np.empty(n + 1)
    rows_qd = np.empty((n + 1, 3))
    rows_q = np.empty((n + 1, 3))
    rows_e = np.empty((n + 1, 3))
    rows_tau = np.empty((n + 1, 3))
    rows_s = np.empty((n + 1, 3))

    config_echo = _config_echo(robot, ctrl_cfg, sim_cfg)

    def log(i, t, st, tau, e, s):
        rows_t[i] = t
        rows_qd[i] = controller.desired_at(t)[0]
        rows_q[i] = st.q
        rows_e[i] = e
        rows_tau[i] = tau
        rows_s[i] = s

    def partial(i):
        return SimTrace(
            rows_t[:i].copy(), rows_qd[:i].copy(), rows_q[:i].copy(),
            rows_e[:i].copy(), rows_tau[:i].copy(), rows_s[:i].copy(),
            config_echo, aborted=True,
        )

    for i in range(n + 1):
        t = i * sim_cfg.dt
        q_d, qd_d, _ = controller.desired_at(t)
        e = state.q - q_d
        edot = state.qdot - qd_d
        s = controller.sliding_surface(e, edot, lam)
        try:
            tau = controller.control_law(robot, state, t, ctrl_cfg, cstate)
        except dynamics.SingularMass as exc:
            raise SimulationAborted(partial(i), exc) from exc
        log(i, t, state, tau, e, s)
        if i == n:
            break
        x = controller.compensator_input(state, t, ctrl_cfg) if cstate is not None else None
        try:
            state = rk4_step(_plant_qddot(robot, tau, sim_cfg), state, t, sim_cfg.dt)
        except dynamics.SingularMass as exc:
            raise SimulationAborted(partial(i + 1), exc) from exc
        if cstate is not None:
            cstate = controller.adapt_weights(cstate, s, x, sim_cfg.dt)

    trace = SimTrace(rows_t, rows_qd, rows_q, rows_e, rows_tau, rows_s, config_echo)
    metrics = compute_metrics(trace, (sim_cfg.t_end / 2.0, sim_cfg.t_end))
    return trace, metrics


def _config_echo(robot, ctrl_cfg, sim_cfg) -> dict:
    echo = {
        "robot": {k: getattr(robot, k) for k in (
            "l1", "l2", "l3", "m1", "m2", "m3", "g", "viscous_coeff", "coulomb_coeff"
        )},
        "estimate_factors": list(robot.estimate_factors),
        "controller": {
            "lambda_gains": list(ctrl_cfg.lambda_gains),
            "robust_gain": ctrl_cfg.robust_gain,
            "boundary_layer": ctrl_cfg.boundary_layer,
            "adaptation_gain": ctrl_cfg.adaptation_gain,
            "rbf_hidden_count": ctrl_cfg.rbf_hidden_count,
            "compensation_enabled": ctrl_cfg.compensation_enabled,
            "input_mode": ctrl_cfg.input_mode,
        },
        "sim": {
            "dt": sim_cfg.dt,
            "t_end": sim_cfg.t_end,
            "disturbance_enabled": sim_cfg.disturbance_enabled,
            "friction_enabled": sim_cfg.friction_enabled,
            "coriolis_mode": sim_cfg.coriolis_mode,
            "rng_seed": sim_cfg.rng_seed,
        },
    }
    if sim_cfg.payload is not None:
        echo["sim"]["payload"] = {
            "extra_mass": sim_cfg.payload.extra_mass,
            "t_on": sim_cfg.payload.t_on,
            "t_off": sim_cfg.payload.t_off,
        }
    return echo


def compute_metrics(trace: SimTrace, window: tuple[float, float]) -> Metrics:
    """Per-joint RMS and max |e| over the window, plus the final-half RMS."""
    t_a, t_b = window
    if not t_a < t_b:
        raise ValueError("window start must precede window end")
    tol = 1e-12
    mask = (trace.t >= t_a - tol) & (trace.t <= t_b + tol)
    if not np.any(mask):
        raise EmptyWindow(f"no trace rows in [{t_a}, {t_b}]")
    e = trace.e[mask]
    rms = np.sqrt(np.mean(e**2, axis=0))
    max_abs = np.max(np.abs(e), axis=0)
    half_start = trace.t[0] + 0.5 * (trace.t[-1] - trace.t[0])
    e_half = trace.e[trace.t >= half_start - tol]
    settling = np.sqrt(np.mean(e_half**2, axis=0))
    return Metrics(window=(t_a, t_b), rms=rms, max_abs=max_abs, settling_rms=settling)


def unforced_energy_drift(
    robot: dynamics.RobotParams,
    t_end: float = 10.0,
    dt: float = 1e-3,
    state0: dynamics.JointState | None = None,
) -> float:
    """Relative energy drift of the unforced, frictionless plant.

    Integrates zero-torque dynamics with the Christoffel coupling (the form
    that conserves energy exactly in continuous time), so any drift measures
    integrator error alone.  Starts from q̇ = (0.5, 0.5, 0), q3 = 0.1 unless
    a state is given.
    """
    if state0 is None:
        state0 = dynamics.JointState(np.array([0.0, 0.0, 0.1]), np.array([0.5, 0.5, 0.0]))
    zero_tau = np.zeros(3)

    def qddot(ti, st):
        return dynamics.forward_dynamics(
            robot, st, zero_tau, t=ti, payload=None, mode="christoffel",
            friction_enabled=False, disturbance_enabled=False,
        )

    e0 = dynamics.total_energy(robot, state0)
    state = state0
    n = int(np.floor(t_end / dt + 1e-9))
    for i in range(n):
        state = rk4_step(qddot, state, i * dt, dt)
    e_final = dynamics.total_energy(robot, state)
    return abs(e_final - e0) / abs(e0)


@dataclass(frozen=True)
class IkReport:
    mean_joint_error: float
    mean_cartesian_error: float
    rows: tuple
    train_report: rbfn.TrainReport
    net: rbfn.RbfNetwork
    target_encoding: str

    CSV_HEADER = "px,py,pz,q1_true,q2_true,q3_true,q1_pred,q2_pred,q3_pred,joint_err,cartesian_err"

    def to_csv(self) -> str:
        lines = [self.CSV_HEADER]
        for r in self.rows:
            lines.append(",".join(format(v, ".17g") for v in r))
        return "\n".join(lines) + "\n"


def _sample_joint_configs(rng: np.random.Generator, n: int) -> np.ndarray:
    q1 = rng.uniform(-np.pi, np.pi, n)
    q2 = rng.uniform(0.1, np.pi - 0.1, n)
    q3 = rng.uniform(0.0, 0.6, n)
    return np.column_stack([q1, q2, q3])


TARGET_ENCODINGS = ("trig", "angle")


def _encode_targets(q: np.ndarray, encoding: str) -> np.ndarray:
    if encoding == "angle":
        return q.copy()
    if encoding == "trig":
        return np.column_stack(
            [np.cos(q[:, 0]), np.sin(q[:, 0]), np.cos(q[:, 1]), np.sin(q[:, 1]), q[:, 2]]
        )
    raise ValueError(f"unknown target encoding {encoding!r}")


def _decode_outputs(y: np.ndarray, encoding: str) -> np.ndarray:
    if encoding == "angle":
        return y
    return np.array([np.arctan2(y[1], y[0]), np.arctan2(y[3], y[2]), y[4]])


def run_ik_experiment(
    robot: dynamics.RobotParams,
    aco_cfg: aco.AcoConfig,
    train_cfg: rbfn.TrainConfig,
    n_train: int = 1000,
    n_test: int = 200,
    rng_seed: int = 0,
    target_encoding: str = "trig",
) -> IkReport:
    """Learn the Cartesian-to-joint map and score it on held-out points.

    Training pairs come from forward kinematics on joint configurations
    sampled over the single elbow-down branch (q2 in (0.1, pi-0.1)), so
    every target is attainable.  Centers are ant-selected from the training
    inputs, widths come from their spread, and the output weights are
    trained per sample.

    The joints are regressed in a trigonometric coding by default,
    (cos q1, sin q1, cos q2, q3), decoded exactly afterwards: the bare base
    angle wraps at +-pi, which no continuous network can follow across the
    seam, and the elbow angle has square-root cusps against radius at both
    workspace rims, while its cosine is exactly quadratic in the inputs.
    ``target_encoding="angle"`` regresses the raw joint vector instead.
    """
    if n_train < 1 or n_test < 1:
        raise ValueError("n_train and n_test must be >= 1")
    rng = np.random.default_rng(rng_seed % 2**32)
    q_all = _sample_joint_configs(rng, n_train + n_test)
    p_all = np.array([dynamics.forward_kinematics(robot, q) for q in q_all])
    q_train, q_test = q_all[:n_train], q_all[n_train:]
    p_train, p_test = p_all[:n_train], p_all[n_train:]

    result = aco.run_aco_centers(p_train, aco_cfg)
    widths = rbfn.widths_from_spread(result.centers)
    targets = _encode_targets(q_train, target_encoding)
    net = rbfn.zero_weight_net(result.centers, widths, targets.shape[1])
    net, report = rbfn.train_lms(net, p_train, targets, train_cfg)

    rows = []
    joint_errs = np.empty(n_test)
    cart_errs = np.empty(n_test)
    for i in range(n_test):
        q_pred = _decode_outputs(rbfn.forward(net, p_test[i]), target_encoding)
        p_back = dynamics.forward_kinematics(robot, q_pred)
        joint_errs[i] = float(np.linalg.norm(q_pred - q_test[i]))
        cart_errs[i] = float(np.linalg.norm(p_back - p_test[i]))
        rows.append((*p_test[i], *q_test[i], *q_pred, joint_errs[i], cart_errs[i]))
    return IkReport(
        mean_joint_error=float(joint_errs.mean()),
        mean_cartesian_error=float(cart_errs.mean()),
        rows=tuple(rows),
        train_report=report,
        net=net,
        target_encoding=target_encoding,
    )
