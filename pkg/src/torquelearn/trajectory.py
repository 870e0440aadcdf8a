"""Quintic point-to-point joint profiles.

The normalized quintic s(u) = 10u^3 - 15u^4 + 6u^5 has zero velocity and
acceleration at both ends, peak |velocity| 15|dq|/(8T) at mid-stroke and
peak |acceleration| 10|dq|/(sqrt(3) T^2).  ``duration_for_move`` inverts
those two bounds, so generated motions respect the configured peak speed
and acceleration exactly (not just approximately).
"""

from __future__ import annotations

import math

import numpy as np

PEAK_VELOCITY_FACTOR = 15.0 / 8.0
PEAK_ACCELERATION_FACTOR = 10.0 / math.sqrt(3.0)


def duration_for_move(delta: float, peak_velocity: float, peak_acceleration: float) -> float:
    """Shortest quintic duration honoring both kinematic limits."""
    delta = abs(float(delta))
    if delta == 0.0:
        return 0.0
    if peak_velocity <= 0.0 or peak_acceleration <= 0.0:
        raise ValueError("peak velocity and acceleration must be > 0")
    t_vel = PEAK_VELOCITY_FACTOR * delta / peak_velocity
    t_acc = math.sqrt(PEAK_ACCELERATION_FACTOR * delta / peak_acceleration)
    return max(t_vel, t_acc)


def quintic_profile(q0: float, q1: float, duration: float, t) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Position, velocity and acceleration of the move at times ``t``.

    Times outside [0, duration] clamp to the respective endpoint at rest.
    """
    t = np.asarray(t, dtype=np.float64)
    if duration <= 0.0:
        q = np.full_like(t, q1)
        return q, np.zeros_like(t), np.zeros_like(t)
    u = np.clip(t / duration, 0.0, 1.0)
    delta = q1 - q0
    s = u ** 3 * (10.0 + u * (-15.0 + 6.0 * u))
    ds = u ** 2 * (30.0 + u * (-60.0 + 30.0 * u))
    dds = u * (60.0 + u * (-180.0 + 120.0 * u))
    q = q0 + delta * s
    qd = delta * ds / duration
    qdd = delta * dds / duration ** 2
    return q, qd, qdd
