import numpy as np
import pytest

from _models import (lagrangian_torque_fd, pendulum_model,
                     two_link_gravity_closed_form, two_link_model)
from torquelearn.dynamics import (JointState, friction_torque, gravity_torque,
                                  inverse_dynamics, inverse_dynamics_batch,
                                  kinetic_energy, mass_matrix, potential_energy)
from torquelearn.robot import default_robot
from torquelearn.trajectory import quintic_profile

G0 = 9.80665


class TestStaticAndGravity:
    def test_no_gravity_static_is_torque_free(self, robot, rng):
        model = default_robot()
        model.gravity = np.zeros(3)
        for _ in range(5):
            q = rng.uniform(model.q_min, model.q_max)
            tau = inverse_dynamics(model, JointState(q, np.zeros(6), np.zeros(6)),
                                   include_friction=False)
            np.testing.assert_allclose(tau, 0.0, atol=1e-12)

    def test_pendulum_holding_torque(self):
        m, lc = 2.0, 0.3
        pend = pendulum_model(mass=m, com_len=lc)
        for q1 in (0.0, 0.4, -1.1, 2.0):
            tau = inverse_dynamics(pend, JointState([q1, 0, 0, 0, 0, 0],
                                                    np.zeros(6), np.zeros(6)),
                                   include_friction=False)
            assert abs(tau[0] - m * G0 * lc * np.cos(q1)) < 1e-12

    def test_pendulum_balanced_upright(self):
        pend = pendulum_model()
        tau = gravity_torque(pend, np.array([np.pi / 2, 0, 0, 0, 0, 0]))
        assert abs(tau[0]) < 1e-12

    def test_zero_gravity_vector_gives_zero_gravity_torque(self, rng):
        model = default_robot()
        model.gravity = np.zeros(3)
        q = rng.uniform(-1.0, 1.0, 6)
        np.testing.assert_allclose(gravity_torque(model, q), 0.0, atol=1e-12)

    def test_two_link_closed_form(self, rng):
        arm = two_link_model()
        # both links stretched along +x
        tau = gravity_torque(arm, np.zeros(6))
        m1, m2, l1, lc1, lc2 = 3.0, 2.0, 0.5, 0.25, 0.2
        assert abs(tau[0] - (m1 * G0 * lc1 + m2 * G0 * (l1 + lc2))) < 1e-8
        for _ in range(25):
            q1, q2 = rng.uniform(-np.pi, np.pi, 2)
            tau = gravity_torque(arm, np.array([q1, q2, 0, 0, 0, 0]))
            g1, g2 = two_link_gravity_closed_form(q1, q2)
            assert abs(tau[0] - g1) < 1e-8
            assert abs(tau[1] - g2) < 1e-8


class TestFullDynamics:
    def test_matches_lagrangian_oracle(self, robot, rng):
        for _ in range(3):
            q = rng.uniform(-1.2, 1.2, 6)
            qd = rng.uniform(-1.0, 1.0, 6)
            qdd = rng.uniform(-2.0, 2.0, 6)
            tau = inverse_dynamics(robot, JointState(q, qd, qdd), include_friction=False)
            tau_fd = lagrangian_torque_fd(robot, q, qd, qdd)
            rel = np.abs(tau - tau_fd) / max(1.0, np.abs(tau_fd).max())
            assert rel.max() < 1e-6

    def test_acceleration_superposition(self, robot, rng):
        q = rng.uniform(-1.0, 1.0, 6)
        g = gravity_torque(robot, q)
        zeros = np.zeros((1, 6))

        def inertial(qdd):
            return inverse_dynamics_batch(robot, q[None], zeros, qdd[None],
                                          include_friction=False)[0] - g

        a, b = rng.uniform(-2.0, 2.0, 6), rng.uniform(-2.0, 2.0, 6)
        lhs = inertial(2.5 * a - 0.75 * b)
        rhs = 2.5 * inertial(a) - 0.75 * inertial(b)
        assert np.abs(lhs - rhs).max() / max(1.0, np.abs(rhs).max()) < 1e-9

    def test_energy_balance_along_trajectory(self, robot):
        q0 = np.array([0.2, -0.4, 0.5, -0.3, 0.6, -0.2])
        q1 = np.array([-0.5, 0.8, -0.6, 0.7, -0.4, 0.9])
        duration, dt = 2.0, 1e-5
        for t in np.linspace(0.05, 1.95, 20):
            states = []
            for tt in (t, t - dt, t + dt):
                cols = [quintic_profile(q0[j], q1[j], duration, np.array([tt]))
                        for j in range(6)]
                states.append(tuple(np.array([c[k][0] for c in cols]) for k in range(3)))
            q, qd, qdd = states[0]
            tau = inverse_dynamics(robot, JointState(q, qd, qdd), include_friction=False)
            power = float(tau @ qd)
            energy = [kinetic_energy(robot, s[0], s[1]) + potential_energy(robot, s[0])
                      for s in states[1:]]
            rate = (energy[1] - energy[0]) / (2 * dt)
            assert abs(power - rate) / max(1.0, abs(power)) < 1e-3


class TestFriction:
    def test_zero_velocity_inside_dead_zone(self, robot):
        np.testing.assert_array_equal(friction_torque(robot, np.zeros(6)), np.zeros(6))

    def test_stated_law(self):
        model = default_robot()
        model.viscous = np.full(6, 0.1)
        model.coulomb = np.full(6, 0.5)
        model.deadzone = np.full(6, 0.01)
        tau = friction_torque(model, np.full(6, 2.0))
        np.testing.assert_allclose(tau, 0.1 * 2.0 + 0.5)
        # inside the dead zone the output is exactly zero
        np.testing.assert_array_equal(friction_torque(model, np.full(6, 0.009)),
                                      np.zeros(6))

    def test_odd_symmetry(self, robot, rng):
        qd = rng.uniform(-3.0, 3.0, (50, 6))
        np.testing.assert_array_equal(friction_torque(robot, -qd),
                                      -friction_torque(robot, qd))

    def test_friction_component_ignores_configuration(self, robot, rng):
        qd = rng.uniform(-2.0, 2.0, 6)
        base = friction_torque(robot, qd)
        for _ in range(3):
            q = rng.uniform(-1.0, 1.0, 6)
            qdd = rng.uniform(-2.0, 2.0, 6)
            with_friction = inverse_dynamics(robot, JointState(q, qd, qdd), True)
            without = inverse_dynamics(robot, JointState(q, qd, qdd), False)
            np.testing.assert_allclose(with_friction - without, base, atol=1e-12)


class TestMassMatrix:
    def test_pendulum_parallel_axis(self):
        m, lc, izz = 2.0, 0.3, 0.05
        pend = pendulum_model(mass=m, com_len=lc, izz=izz)
        B = mass_matrix(pend, np.array([0.7, 0, 0, 0, 0, 0]))
        assert abs(B[0, 0] - (izz + m * lc ** 2)) < 1e-10

    def test_symmetric_positive_definite(self, robot, rng):
        for _ in range(10):
            q = rng.uniform(robot.q_min, robot.q_max)
            B = mass_matrix(robot, q)
            assert np.abs(B - B.T).max() < 1e-9
            np.linalg.cholesky(B)


class TestInputChecking:
    def test_non_finite_input_names_joint(self, robot):
        q = np.zeros(6)
        q[2] = np.nan
        with pytest.raises(ValueError, match="joint 3"):
            inverse_dynamics(robot, JointState(q, np.zeros(6), np.zeros(6)))
        qd = np.zeros(6)
        qd[5] = np.inf
        with pytest.raises(ValueError, match="joint 6"):
            friction_torque(robot, qd)

    def test_batch_shape_checked(self, robot):
        with pytest.raises(ValueError, match="columns"):
            inverse_dynamics_batch(robot, np.zeros((2, 5)), np.zeros((2, 6)),
                                   np.zeros((2, 6)))
