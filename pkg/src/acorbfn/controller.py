"""Adaptive tracking controller: scaled model feedforward, RBF compensation,
and a boundary-layer sliding term.

The feedforward uses deliberately degraded model matrices (the estimate
factors in :class:`acorbfn.dynamics.RobotParams`), never sees the payload,
friction or disturbance, and is topped up by two corrective channels: a
saturated robust term -k sat(s / eps) acting on the sliding variable
s = ė + Λ e, and an RBF network whose output weights adapt online in the
direction that shrinks s.  The network's centers and widths are frozen
during control; they are chosen offline from a short preliminary run.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from . import dynamics, rbfn

INPUT_MODES = ("error", "state")


@dataclass(frozen=True)
class ControllerConfig:
    lambda_gains: tuple[float, float, float] = (5.0, 5.0, 5.0)
    robust_gain: float = 15.0
    boundary_layer: float = 0.05
    adaptation_gain: float = 0.5
    rbf_hidden_count: int = 15
    compensation_enabled: bool = True
    input_mode: str = "error"

    def __post_init__(self):
        if any(lam <= 0.0 for lam in self.lambda_gains):
            raise ValueError("lambda gains must be strictly positive")
        if self.boundary_layer <= 0.0:
            raise ValueError("boundary_layer must be strictly positive")
        if self.robust_gain < 0.0:
            raise ValueError("robust_gain must be nonnegative")
        if self.adaptation_gain < 0.0:
            raise ValueError("adaptation_gain must be nonnegative")
        if self.rbf_hidden_count < 1:
            raise ValueError("rbf_hidden_count must be >= 1")
        if self.input_mode not in INPUT_MODES:
            raise ValueError(f"input_mode must be one of {INPUT_MODES}")


@dataclass(frozen=True)
class ControlState:
    """Online state of the compensator: the network and its adaptation gain."""

    compensator: rbfn.RbfNetwork
    adaptation_gain_current: float

    def __post_init__(self):
        if self.compensator.input_dim != 6 or self.compensator.output_dim != 3:
            raise ValueError("compensator must map a 6-vector to 3 torques")


@dataclass(frozen=True)
class DesiredTrajectory:
    """Reference position and its first two exact analytic derivatives."""

    position: Callable[[float], np.ndarray]
    velocity: Callable[[float], np.ndarray]
    acceleration: Callable[[float], np.ndarray]

    def at(self, t: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.position(t), self.velocity(t), self.acceleration(t)


def _ref_position(t: float) -> np.ndarray:
    return np.array(
        [
            1.0 + 0.1 * (np.sin(t) + np.sin(2.0 * t)),
            1.0 + 0.1 * (np.cos(2.0 * t) + np.cos(3.0 * t)),
            1.0 + 0.1 * (np.sin(3.0 * t) + np.sin(4.0 * t)),
        ]
    )


def _ref_velocity(t: float) -> np.ndarray:
    return np.array(
        [
            0.1 * (np.cos(t) + 2.0 * np.cos(2.0 * t)),
            0.1 * (-2.0 * np.sin(2.0 * t) - 3.0 * np.sin(3.0 * t)),
            0.1 * (3.0 * np.cos(3.0 * t) + 4.0 * np.cos(4.0 * t)),
        ]
    )


def _ref_acceleration(t: float) -> np.ndarray:
    return np.array(
        [
            0.1 * (-np.sin(t) - 4.0 * np.sin(2.0 * t)),
            0.1 * (-4.0 * np.cos(2.0 * t) - 9.0 * np.cos(3.0 * t)),
            0.1 * (-9.0 * np.sin(3.0 * t) - 16.0 * np.sin(4.0 * t)),
        ]
    )


REFERENCE_TRAJECTORY = DesiredTrajectory(_ref_position, _ref_velocity, _ref_acceleration)


def desired_at(t: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Benchmark reference (q_d, q̇_d, q̈_d) for the three joints at time t."""
    return REFERENCE_TRAJECTORY.at(t)


def sliding_surface(e: np.ndarray, edot: np.ndarray, lambda_gains) -> np.ndarray:
    """s = ė + Λ e with diagonal Λ; driving s to zero decays e exponentially."""
    return np.asarray(edot, dtype=float) + np.asarray(lambda_gains, dtype=float) * np.asarray(e, dtype=float)


def compensator_input(
    state: dynamics.JointState, t: float, cfg: ControllerConfig
) -> np.ndarray:
    """The 6-vector the compensator conditions on: (e, ė) or raw (q, q̇)."""
    if cfg.input_mode == "state":
        return np.concatenate([state.q, state.qdot])
    q_d, qd_d, _ = desired_at(t)
    return np.concatenate([state.q - q_d, state.qdot - qd_d])


def control_law(
    params: dynamics.RobotParams,
    state: dynamics.JointState,
    t: float,
    cfg: ControllerConfig,
    cstate: ControlState | None = None,
) -> np.ndarray:
    """Torque command for the current state and time.

    tau = M̂ (q̈_d - Λ ė) + Ĉ (q̇_d - Λ e) + Ĝ + u_rbf - k sat(s / eps),
    with M̂, Ĉ, Ĝ the factor-scaled model matrices evaluated without any
    payload knowledge, and sat the componentwise clamp to [-1, 1].  The
    compensator term u_rbf is zero when compensation is disabled, in which
    case the output is a pure function of (state, t, cfg).
    """
    q_d, qd_d, qdd_d = desired_at(t)
    e = state.q - q_d
    edot = state.qdot - qd_d
    lam = np.asarray(cfg.lambda_gains, dtype=float)
    s = sliding_surface(e, edot, lam)

    f_m, f_c, f_g = params.estimate_factors
    m_hat = f_m * dynamics.mass_matrix(params, state.q, 0.0)
    c_hat = f_c * dynamics.coriolis_matrix(params, state.q, state.qdot, mode="symmetric")
    g_hat = f_g * dynamics.gravity_vector(params, 0.0)

    tau = m_hat @ (qdd_d - lam * edot) + c_hat @ (qd_d - lam * e) + g_hat
    if cfg.compensation_enabled:
        if cstate is None:
            raise ValueError("compensation enabled but no ControlState supplied")
        tau = tau + rbfn.forward(cstate.compensator, compensator_input(state, t, cfg))
    tau = tau - cfg.robust_gain * np.clip(s / cfg.boundary_layer, -1.0, 1.0)
    return tau


def adapt_weights(cstate: ControlState, s: np.ndarray, x: np.ndarray, dt: float) -> ControlState:
    """One Euler step of the weight adaptation law.

    w_ji <- w_ji - alpha * s_j * phi_i(x) * dt, driving the compensator
    output in the direction that reduces the sliding variable.  Centers and
    widths stay bit-identical.
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    net = cstate.compensator
    phi = rbfn.activations(net, x)
    update = cstate.adaptation_gain_current * dt * np.outer(np.asarray(s, dtype=float), phi)
    new_net = rbfn.RbfNetwork(net.centers, net.widths, net.weights - update)
    return replace(cstate, compensator=new_net)
