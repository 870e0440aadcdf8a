import numpy as np
import pytest

from torquelearn.acquisition import SweepSpec, generate_grid_sweep, shuffle
from torquelearn.robot import default_robot


def make_tiny_sweep(**overrides) -> SweepSpec:
    """A fast campaign (~2.9k rows at 100 Hz) used across the suite."""
    settings = dict(
        start=[-1.0, -0.8, -1.0, -1.0, -1.0, -1.0],
        stop=[1.0, 1.2, 1.0, 1.0, 1.0, 1.0],
        step=[0.5, 0.5, 0.5, 0.5, 0.5, 0.5],
        peak_velocity={"a": 1.0, "b": 1.0, "c": 1.0},
        peak_acceleration={"a": 2.0, "b": 2.0, "c": 2.0},
        sample_period=0.01,
        noise_sigma=0.01,
        noise_joint6_multiplier=10.0,
    )
    settings.update(overrides)
    return SweepSpec(**settings)


@pytest.fixture(scope="session")
def robot():
    return default_robot()


@pytest.fixture(scope="session")
def small_dataset(robot):
    """Shuffled ~2.9k-row dataset shared by training-level tests."""
    return shuffle(generate_grid_sweep(robot, make_tiny_sweep(), seed=3), seed=3)


@pytest.fixture(scope="session")
def pinned_dataset(robot):
    """The full default campaign (~30k rows), seed pinned at 42."""
    from torquelearn.acquisition import default_sweep

    return shuffle(generate_grid_sweep(robot, default_sweep(), seed=42), seed=42)


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)
