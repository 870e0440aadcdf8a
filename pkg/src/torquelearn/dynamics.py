"""Inverse dynamics of the serial chain via the recursive Newton-Euler
algorithm, plus the energy functions used to cross-check it.

The recursion runs an outward velocity/acceleration pass and an inward
force/torque pass over the six links, with gravity folded in by giving the
base frame a linear acceleration of ``-gravity``.  All quantities are
expressed in the local link frames (modified DH convention, see robot.py).

Everything here is a pure function of its inputs and float64 throughout.
``inverse_dynamics_batch`` vectorizes the recursion over N states at once;
the per-state wrappers delegate to it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .robot import N_JOINTS, RobotModel
from .validation import as_matrix, as_vector, require_finite


@dataclass
class JointState:
    """One (position, velocity, acceleration) triple for all six joints."""

    q: np.ndarray
    qd: np.ndarray
    qdd: np.ndarray

    def __post_init__(self):
        self.q = as_vector("q", self.q, N_JOINTS)
        self.qd = as_vector("qd", self.qd, N_JOINTS)
        self.qdd = as_vector("qdd", self.qdd, N_JOINTS)

    def check_finite(self) -> None:
        require_finite("q", self.q, per_joint=True)
        require_finite("qd", self.qd, per_joint=True)
        require_finite("qdd", self.qdd, per_joint=True)


def _link_rotations(model: RobotModel, Q: np.ndarray) -> np.ndarray:
    """Per-state rotation matrices R[i] mapping frame i+1 vectors to frame i.

    Q has shape (N, 6); the result has shape (6, N, 3, 3).
    """
    n = Q.shape[0]
    rot = np.empty((N_JOINTS, n, 3, 3))
    for i in range(N_JOINTS):
        theta = Q[:, i] + model.dh_theta[i]
        ct, st = np.cos(theta), np.sin(theta)
        ca, sa = np.cos(model.dh_alpha[i]), np.sin(model.dh_alpha[i])
        rot[i, :, 0, 0] = ct
        rot[i, :, 0, 1] = -st
        rot[i, :, 0, 2] = 0.0
        rot[i, :, 1, 0] = st * ca
        rot[i, :, 1, 1] = ct * ca
        rot[i, :, 1, 2] = -sa
        rot[i, :, 2, 0] = st * sa
        rot[i, :, 2, 1] = ct * sa
        rot[i, :, 2, 2] = ca
    return rot


def _frame_offsets(model: RobotModel) -> np.ndarray:
    """Origin of frame i+1 expressed in frame i (constant per joint), (6, 3)."""
    offs = np.empty((N_JOINTS, 3))
    for i in range(N_JOINTS):
        ca, sa = np.cos(model.dh_alpha[i]), np.sin(model.dh_alpha[i])
        offs[i] = (model.dh_a[i], -sa * model.dh_d[i], ca * model.dh_d[i])
    return offs


def friction_torque(model: RobotModel, qd: np.ndarray) -> np.ndarray:
    """Viscous + Coulomb joint friction with a velocity dead zone.

    Inside the dead zone (|qd| <= half-width) the output is exactly zero;
    outside it is viscous * qd + coulomb * sign(qd).  Accepts a (6,) vector
    or an (N, 6) batch.
    """
    qd = np.asarray(qd, dtype=np.float64)
    require_finite("qd", qd, per_joint=True)
    moving = np.abs(qd) > model.deadzone
    return np.where(moving, model.viscous * qd + model.coulomb * np.sign(qd), 0.0)


def inverse_dynamics_batch(model: RobotModel, Q, QD, QDD,
                           include_friction: bool = True) -> np.ndarray:
    """Joint torques for a batch of states, shapes (N, 6) -> (N, 6)."""
    Q = as_matrix("Q", Q, N_JOINTS)
    QD = as_matrix("QD", QD, N_JOINTS)
    QDD = as_matrix("QDD", QDD, N_JOINTS)
    require_finite("q", Q, per_joint=True)
    require_finite("qd", QD, per_joint=True)
    require_finite("qdd", QDD, per_joint=True)

    n = Q.shape[0]
    rot = _link_rotations(model, Q)          # frame i+1 -> frame i
    offs = _frame_offsets(model)

    omega = np.zeros((n, 3))
    omega_d = np.zeros((n, 3))
    acc = np.broadcast_to(-model.gravity, (n, 3)).copy()

    forces = np.empty((N_JOINTS, n, 3))
    moments = np.empty((N_JOINTS, n, 3))
    for i in range(N_JOINTS):
        rot_t = rot[i].swapaxes(-1, -2)       # frame i -> frame i+1
        qd_i = QD[:, i:i + 1]
        qdd_i = QDD[:, i:i + 1]

        omega_parent = np.einsum("nij,nj->ni", rot_t, omega)
        acc_terms = (np.cross(omega_d, offs[i])
                     + np.cross(omega, np.cross(omega, offs[i]))
                     + acc)
        acc = np.einsum("nij,nj->ni", rot_t, acc_terms)

        omega_d = np.einsum("nij,nj->ni", rot_t, omega_d)
        omega_d[:, 2] += qdd_i[:, 0]
        omega_d += np.cross(omega_parent, np.column_stack(
            [np.zeros((n, 2)), qd_i]))
        omega = omega_parent
        omega[:, 2] += qd_i[:, 0]

        com = model.coms[i]
        acc_com = (np.cross(omega_d, com)
                   + np.cross(omega, np.cross(omega, com))
                   + acc)
        forces[i] = model.masses[i] * acc_com
        inertia = model.inertias[i]
        moments[i] = omega_d @ inertia.T + np.cross(omega, omega @ inertia.T)

    tau = np.empty((n, N_JOINTS))
    f_child = np.zeros((n, 3))
    n_child = np.zeros((n, 3))
    for i in range(N_JOINTS - 1, -1, -1):
        if i == N_JOINTS - 1:
            f_rot = np.zeros((n, 3))
            n_rot = np.zeros((n, 3))
        else:
            f_rot = np.einsum("nij,nj->ni", rot[i + 1], f_child)
            n_rot = np.einsum("nij,nj->ni", rot[i + 1], n_child)
            n_rot += np.cross(offs[i + 1], f_rot)
        f_child = f_rot + forces[i]
        n_child = moments[i] + n_rot + np.cross(model.coms[i], forces[i])
        tau[:, i] = n_child[:, 2]

    if include_friction:
        tau = tau + friction_torque(model, QD)
    return tau


def inverse_dynamics(model: RobotModel, state: JointState,
                     include_friction: bool = True) -> np.ndarray:
    """Torque vector (N m) realizing the given joint state, per the chain's
    rigid-body dynamics (inertial + Coriolis/centripetal + gravity terms,
    plus friction when enabled)."""
    state.check_finite()
    return inverse_dynamics_batch(
        model, state.q[None, :], state.qd[None, :], state.qdd[None, :],
        include_friction=include_friction)[0]


def gravity_torque(model: RobotModel, q) -> np.ndarray:
    """Torque holding the arm static at q (zero velocity and acceleration)."""
    q = as_vector("q", q, N_JOINTS)
    require_finite("q", q, per_joint=True)
    zeros = np.zeros((1, N_JOINTS))
    return inverse_dynamics_batch(model, q[None, :], zeros, zeros,
                                  include_friction=False)[0]


def mass_matrix(model: RobotModel, q) -> np.ndarray:
    """Joint-space inertia matrix B(q), symmetric positive-definite.

    Column j is the torque response to a unit acceleration of joint j with
    gravity and velocity terms removed.
    """
    q = as_vector("q", q, N_JOINTS)
    require_finite("q", q, per_joint=True)
    Q = np.tile(q, (N_JOINTS + 1, 1))
    QD = np.zeros((N_JOINTS + 1, N_JOINTS))
    QDD = np.vstack([np.eye(N_JOINTS), np.zeros(N_JOINTS)])
    tau = inverse_dynamics_batch(model, Q, QD, QDD, include_friction=False)
    return (tau[:N_JOINTS] - tau[N_JOINTS]).T


def link_frames(model: RobotModel, q) -> tuple[np.ndarray, np.ndarray]:
    """World-frame pose of every link frame: rotations (6,3,3), origins (6,3)."""
    q = as_vector("q", q, N_JOINTS)
    rot = _link_rotations(model, q[None, :])[:, 0]
    offs = _frame_offsets(model)
    R = np.empty((N_JOINTS, 3, 3))
    p = np.empty((N_JOINTS, 3))
    R_acc = np.eye(3)
    p_acc = np.zeros(3)
    for i in range(N_JOINTS):
        p_acc = p_acc + R_acc @ offs[i]
        R_acc = R_acc @ rot[i]
        R[i] = R_acc
        p[i] = p_acc
    return R, p


def kinetic_energy(model: RobotModel, q, qd) -> float:
    """Total kinetic energy, computed from world-frame link twists.

    Deliberately built on frame kinematics and geometric Jacobian terms (not
    the Newton-Euler recursion) so it can serve as an independent check.
    """
    q = as_vector("q", q, N_JOINTS)
    qd = as_vector("qd", qd, N_JOINTS)
    R, p = link_frames(model, q)
    axes = R[:, :, 2]
    total = 0.0
    omega = np.zeros(3)
    for i in range(N_JOINTS):
        omega = omega + qd[i] * axes[i]
        p_com = p[i] + R[i] @ model.coms[i]
        v_com = np.zeros(3)
        for j in range(i + 1):
            v_com += qd[j] * np.cross(axes[j], p_com - p[j])
        inertia_world = R[i] @ model.inertias[i] @ R[i].T
        total += 0.5 * model.masses[i] * v_com @ v_com
        total += 0.5 * omega @ inertia_world @ omega
    return float(total)


def potential_energy(model: RobotModel, q) -> float:
    """Gravitational potential energy (zero level at the base origin)."""
    q = as_vector("q", q, N_JOINTS)
    R, p = link_frames(model, q)
    total = 0.0
    for i in range(N_JOINTS):
        p_com = p[i] + R[i] @ model.coms[i]
        total -= model.masses[i] * model.gravity @ p_com
    return float(total)
