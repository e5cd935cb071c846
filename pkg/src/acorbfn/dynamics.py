"""Rigid-body model of a three-link SCARA arm.

Two revolute joints move the arm in the horizontal plane, a prismatic third
joint translates the tool vertically.  The model ships the exact inertia,
velocity-coupling and gravity terms used by the tracking experiments, a
Coulomb + viscous friction law, a sinusoidal torque disturbance, forward
kinematics and a closed-form inverse-kinematics oracle.

All functions are pure: they allocate fresh arrays and never mutate their
inputs, so they are safe to call from any number of concurrent contexts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

CORIOLIS_MODES = ("symmetric", "christoffel")


class SingularMass(Exception):
    """Mass matrix too ill-conditioned to invert at the requested pose."""


class OutOfWorkspace(ValueError):
    """Cartesian target outside the annular reach of the planar pair."""


@dataclass(frozen=True)
class RobotParams:
    """Geometric and inertial constants of the arm.

    Defaults are the benchmark values: 1.0 / 0.8 / 0.6 m links,
    1.0 / 0.8 / 0.5 kg link masses, g = 9.8, viscous friction 12 N·m·s/rad
    and Coulomb friction 0.2 N·m on every joint.  ``estimate_factors``
    scale the model matrices the controller is allowed to know
    (0.9 M, 0.8 C, 0.85 G), expressing deliberate model mismatch.
    """

    l1: float = 1.0
    l2: float = 0.8
    l3: float = 0.6
    m1: float = 1.0
    m2: float = 0.8
    m3: float = 0.5
    g: float = 9.8
    viscous_coeff: float = 12.0
    coulomb_coeff: float = 0.2
    estimate_factors: tuple[float, float, float] = (0.9, 0.8, 0.85)

    def __post_init__(self):
        for name in ("l1", "l2", "l3", "m1", "m2", "m3"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be strictly positive")
        for f in self.estimate_factors:
            if not 0.0 < f <= 1.0:
                raise ValueError("estimate factors must lie in (0, 1]")


@dataclass(frozen=True)
class JointState:
    """Joint coordinates (rad, rad, m) and velocities. Entries must be finite."""

    q: np.ndarray
    qdot: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float).reshape(3)
        qdot = np.asarray(self.qdot, dtype=float).reshape(3)
        if not (np.all(np.isfinite(q)) and np.all(np.isfinite(qdot))):
            raise ValueError("joint state entries must be finite")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "qdot", qdot)


@dataclass(frozen=True)
class PayloadSchedule:
    """Extra mass carried by the tool joint over the window [t_on, t_off]."""

    extra_mass: float = 10.0
    t_on: float = 1.0
    t_off: float = 4.0

    def __post_init__(self):
        if self.extra_mass < 0.0:
            raise ValueError("extra_mass must be nonnegative")
        if not self.t_on < self.t_off:
            raise ValueError("t_on must precede t_off")

    def mass_at(self, t: float) -> float:
        return self.extra_mass if self.t_on <= t <= self.t_off else 0.0


def mass_matrix(params: RobotParams, q: np.ndarray, payload_mass: float = 0.0) -> np.ndarray:
    """Inertia matrix M(q).

    The planar 2x2 block depends on q2 only; joint 3 is decoupled with
    M33 = m3 + payload.  M21 is assigned from M12, so symmetry is exact.
    Note the corner of the off-diagonal entry: M12 carries a *negative*
    constant offset, which makes the matrix indefinite once cos(q2) drops
    below roughly -0.48 (payload 0).  Positive definiteness holds on the
    operating envelope |q2| <= pi/2 for payloads up to 20 kg and is checked
    numerically by the diagnostics, not assumed.
    """
    if payload_mass < 0.0:
        raise ValueError("payload_mass must be nonnegative")
    l1, l2 = params.l1, params.l2
    m1, m2 = params.m1, params.m2
    m3 = params.m3 + payload_mass
    c2 = np.cos(q[1])
    m11 = l1**2 * (m1 / 3.0 + m2 + m3) + l1 * l2 * (m2 + 2.0 * m3) * c2 + l2**2 * (m2 / 3.0 + m3)
    m12 = l1 * l2 * (m2 / 2.0 + m3) * c2 - l2**2 * (m2 / 3.0 + m3)
    m22 = l2**2 * (m2 / 3.0 + m3)
    return np.array([[m11, m12, 0.0], [m12, m22, 0.0], [0.0, 0.0, m3]])


def _mass_matrix_dq2(params: RobotParams, q: np.ndarray, payload_mass: float) -> np.ndarray:
    """Partial derivative of M with respect to q2 (the only live coordinate)."""
    l1, l2 = params.l1, params.l2
    m2 = params.m2
    m3 = params.m3 + payload_mass
    s2 = np.sin(q[1])
    d11 = -l1 * l2 * (m2 + 2.0 * m3) * s2
    d12 = -l1 * l2 * (m2 / 2.0 + m3) * s2
    return np.array([[d11, d12, 0.0], [d12, 0.0, 0.0], [0.0, 0.0, 0.0]])


def coriolis_matrix(
    params: RobotParams,
    q: np.ndarray,
    qdot: np.ndarray,
    mode: str = "symmetric",
    payload_mass: float = 0.0,
) -> np.ndarray:
    """Velocity-coupling matrix C(q, q̇).

    ``symmetric`` is the arm-specific form with C12 = C21 and every term
    proportional to the elbow velocity; it does not satisfy the
    skew-symmetry of (dM/dt - 2C), so it cannot be used for energy
    bookkeeping.  ``christoffel`` derives C from the mass matrix through
    Christoffel symbols, which restores that property by construction.
    The payload affects the christoffel form only (through M).
    """
    if mode == "symmetric":
        l1, l2, m2 = params.l1, params.l2, params.m2
        m3 = params.m3 + payload_mass
        c1 = l1 * l2 * np.sin(q[1])
        c11 = -qdot[1] * c1 * (m2 + 2.0 * m3)
        c12 = -qdot[1] * c1 * (m2 / 2.0 + m3)
        return np.array([[c11, c12, 0.0], [c12, 0.0, 0.0], [0.0, 0.0, 0.0]])
    if mode == "christoffel":
        dm = _mass_matrix_dq2(params, q, payload_mass)
        # C_ij = sum_k 0.5 (dM_ij/dq_k + dM_ik/dq_j - dM_jk/dq_i) q̇_k,
        # with only the q2 partial nonzero.
        c = np.zeros((3, 3))
        for i in range(3):
            for j in range(3):
                val = 0.5 * dm[i, j] * qdot[1]
                if j == 1:
                    val += 0.5 * (dm[i, 0] * qdot[0] + dm[i, 1] * qdot[1] + dm[i, 2] * qdot[2])
                if i == 1:
                    val -= 0.5 * (dm[j, 0] * qdot[0] + dm[j, 1] * qdot[1] + dm[j, 2] * qdot[2])
                c[i, j] = val
        return c
    raise ValueError(f"unknown coriolis mode {mode!r}")


def gravity_vector(params: RobotParams, payload_mass: float = 0.0) -> np.ndarray:
    """Gravity load: only the prismatic joint feels it, G3 = -(m3 + payload) g."""
    return np.array([0.0, 0.0, -(params.m3 + payload_mass) * params.g])


def friction_force(params: RobotParams, qdot: np.ndarray) -> np.ndarray:
    """Viscous plus Coulomb friction per joint; sign(0) is taken as 0."""
    qdot = np.asarray(qdot, dtype=float)
    return params.viscous_coeff * qdot + params.coulomb_coeff * np.sign(qdot)


def disturbance(t: float) -> np.ndarray:
    """External torque disturbance 5 sin(2t) applied to every joint."""
    d = 5.0 * np.sin(2.0 * t)
    return np.array([d, d, d])


def forward_dynamics(
    params: RobotParams,
    state: JointState,
    torque: np.ndarray,
    t: float = 0.0,
    payload: PayloadSchedule | None = None,
    mode: str = "symmetric",
    friction_enabled: bool = True,
    disturbance_enabled: bool = True,
) -> np.ndarray:
    """Joint accelerations of the plant under the manipulator equation.

    Solves M(q) q̈ = τ + d(t) - C(q, q̇) q̇ - G - f(q̇).  The payload mass is
    applied to M and G only inside its time window.  Raises SingularMass when
    cond(M) exceeds 1e12.
    """
    pay = payload.mass_at(t) if payload is not None else 0.0
    m = mass_matrix(params, state.q, pay)
    if np.linalg.cond(m) > 1e12:
        raise SingularMass(f"mass matrix condition number exceeds 1e12 at q2={state.q[1]:.6f}")
    c = coriolis_matrix(params, state.q, state.qdot, mode=mode, payload_mass=pay)
    rhs = np.asarray(torque, dtype=float) - c @ state.qdot - gravity_vector(params, pay)
    if friction_enabled:
        rhs = rhs - friction_force(params, state.qdot)
    if disturbance_enabled:
        rhs = rhs + disturbance(t)
    return np.linalg.solve(m, rhs)


def forward_kinematics(params: RobotParams, q: np.ndarray) -> np.ndarray:
    """Tool position: planar two-link reach plus vertical prismatic offset."""
    x = params.l1 * np.cos(q[0]) + params.l2 * np.cos(q[0] + q[1])
    y = params.l1 * np.sin(q[0]) + params.l2 * np.sin(q[0] + q[1])
    return np.array([x, y, q[2]])


def analytic_ik(params: RobotParams, p: np.ndarray, branch: str = "elbow_down") -> np.ndarray:
    """Closed-form inverse kinematics for a reachable Cartesian point.

    ``elbow_down`` fixes q2 in [0, pi], ``elbow_up`` in [-pi, 0].  Used as
    the exact oracle against which learned inverse maps are scored.
    """
    if branch not in ("elbow_up", "elbow_down"):
        raise ValueError(f"unknown branch {branch!r}")
    l1, l2 = params.l1, params.l2
    x, y, z = float(p[0]), float(p[1]), float(p[2])
    r2 = x * x + y * y
    r = np.sqrt(r2)
    if r < abs(l1 - l2) - 1e-12 or r > l1 + l2 + 1e-12:
        raise OutOfWorkspace(f"radius {r:.6f} outside [{abs(l1 - l2)}, {l1 + l2}]")
    c2 = np.clip((r2 - l1 * l1 - l2 * l2) / (2.0 * l1 * l2), -1.0, 1.0)
    s2 = np.sqrt(1.0 - c2 * c2)
    if branch == "elbow_up":
        s2 = -s2
    q2 = np.arctan2(s2, c2)
    q1 = np.arctan2(y, x) - np.arctan2(l2 * s2, l1 + l2 * c2)
    q1 = np.arctan2(np.sin(q1), np.cos(q1))  # wrap into (-pi, pi]
    return np.array([q1, q2, z])


def total_energy(params: RobotParams, state: JointState, payload_mass: float = 0.0) -> float:
    """Kinetic plus potential energy, the integrator's conservation diagnostic.

    The potential is -(m3 + payload) g q3 so that its gradient equals the
    gravity vector above; with the christoffel coupling this quantity is
    an exact invariant of the unforced, frictionless plant.
    """
    m = mass_matrix(params, state.q, payload_mass)
    kinetic = 0.5 * float(state.qdot @ m @ state.qdot)
    potential = -(params.m3 + payload_mass) * params.g * state.q[2]
    return kinetic + potential
