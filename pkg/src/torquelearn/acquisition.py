"""Synthetic data-collection campaign for the torque-learning pipeline.

The protocol mirrors a grid-search style acquisition on a real arm: joints
are organized in three motion groups (a: joint 1, b: joints 2-3, c: joints
4-6), each joint sweeps a ladder of grid targets one move at a time, and
joints are never reset between targets - each move starts where the last one
ended.  Joint 1 only moves during its own group's sweep.  States are sampled
on a fixed clock and torques come from the rigid-body model with friction,
optionally corrupted by Gaussian sensor noise (joint 6 noisier by default,
emulating an unloaded wrist flange).
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dynamics import JointState, inverse_dynamics_batch
from .robot import N_JOINTS, RobotModel
from .trajectory import duration_for_move, quintic_profile
from .validation import require_finite

GROUP_ORDER = ("a", "b", "c")
GROUP_JOINTS = {"a": (0,), "b": (1, 2), "c": (3, 4, 5)}  # 0-based joint indices
JOINT_GROUP = ("a", "b", "b", "c", "c", "c")

CSV_HEADER = ("t,"
              + ",".join(f"q{i}" for i in range(1, 7)) + ","
              + ",".join(f"dq{i}" for i in range(1, 7)) + ","
              + ",".join(f"ddq{i}" for i in range(1, 7)) + ","
              + ",".join(f"tau{i}" for i in range(1, 7)))
N_COLUMNS = 25

_SWEEP_SCALAR_KEYS = ("sample_period", "noise.sigma", "noise.joint6_multiplier")


@dataclass
class SweepSpec:
    """Grid-sweep campaign settings (angles rad, speeds rad/s, rad/s^2)."""

    start: np.ndarray                 # (6,) initial angle per joint
    stop: np.ndarray                  # (6,) final angle per joint
    step: np.ndarray                  # (6,) grid step per joint, > 0
    peak_velocity: dict[str, float]   # per group a/b/c
    peak_acceleration: dict[str, float]
    sample_period: float = 0.01
    noise_sigma: float = 0.01         # torque noise std dev, N m (0 = exact)
    noise_joint6_multiplier: float = 10.0

    def __post_init__(self):
        self.start = np.asarray(self.start, dtype=np.float64).reshape(N_JOINTS)
        self.stop = np.asarray(self.stop, dtype=np.float64).reshape(N_JOINTS)
        self.step = np.asarray(self.step, dtype=np.float64).reshape(N_JOINTS)

    @property
    def joint_groups(self) -> tuple[str, ...]:
        """Fixed group id per joint; the partition is not configurable."""
        return JOINT_GROUP

    def targets(self, joint: int) -> np.ndarray:
        """Grid targets for a joint: start + k*step, k = 1..K, K >= 1."""
        span = self.stop[joint] - self.start[joint]
        count = int(math.floor(span / self.step[joint] + 1e-6))
        return self.start[joint] + self.step[joint] * np.arange(1, count + 1)

    def validate(self, model: RobotModel) -> None:
        for j in range(N_JOINTS):
            if not self.step[j] > 0.0:
                raise ValueError(f"joint {j + 1} grid step must be > 0")
            if len(self.targets(j)) == 0:
                raise ValueError(f"joint {j + 1} grid is empty (stop < start + step)")
            poses = np.concatenate([[self.start[j]], self.targets(j)])
            for pose in poses:
                if pose < model.q_min[j] or pose > model.q_max[j]:
                    raise ValueError(
                        f"joint {j + 1} grid target {pose:.4f} rad is outside "
                        f"limits [{model.q_min[j]:.4f}, {model.q_max[j]:.4f}]")
        for group in GROUP_ORDER:
            if self.peak_velocity[group] <= 0.0 or self.peak_acceleration[group] <= 0.0:
                raise ValueError(f"group {group} speed settings must be > 0")
        if self.sample_period <= 0.0:
            raise ValueError("sample period must be > 0")
        if self.noise_sigma < 0.0 or self.noise_joint6_multiplier < 0.0:
            raise ValueError("noise settings must be >= 0")

    def noise_std(self) -> np.ndarray:
        std = np.full(N_JOINTS, self.noise_sigma)
        std[5] *= self.noise_joint6_multiplier
        return std

    def to_text(self) -> str:
        lines = ["# torquelearn sweep settings",
                 f"sample_period = {float(self.sample_period)!r}",
                 f"noise.sigma = {float(self.noise_sigma)!r}",
                 f"noise.joint6_multiplier = {float(self.noise_joint6_multiplier)!r}"]
        for group in GROUP_ORDER:
            lines.append(f"group_{group}.peak_velocity = {float(self.peak_velocity[group])!r}")
            lines.append(f"group_{group}.peak_acceleration = {float(self.peak_acceleration[group])!r}")
        for j in range(N_JOINTS):
            lines.append(f"joint{j + 1}.start = {float(self.start[j])!r}")
            lines.append(f"joint{j + 1}.stop = {float(self.stop[j])!r}")
            lines.append(f"joint{j + 1}.step = {float(self.step[j])!r}")
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        return "sha256:" + hashlib.sha256(self.to_text().encode()).hexdigest()


def sweep_from_text(text: str, source: str = "<string>") -> SweepSpec:
    from .robot import parse_key_values

    values = parse_key_values(text, source)
    expected = list(_SWEEP_SCALAR_KEYS)
    for group in GROUP_ORDER:
        expected += [f"group_{group}.peak_velocity", f"group_{group}.peak_acceleration"]
    for j in range(N_JOINTS):
        expected += [f"joint{j + 1}.start", f"joint{j + 1}.stop", f"joint{j + 1}.step"]
    unknown = sorted(set(values) - set(expected))
    if unknown:
        raise ValueError(f"{source}: unknown key(s): {', '.join(unknown)}")
    missing = [k for k in expected if k not in values]
    if missing:
        raise ValueError(f"{source}: missing key(s): {', '.join(missing)}")
    return SweepSpec(
        start=[values[f"joint{j + 1}.start"] for j in range(N_JOINTS)],
        stop=[values[f"joint{j + 1}.stop"] for j in range(N_JOINTS)],
        step=[values[f"joint{j + 1}.step"] for j in range(N_JOINTS)],
        peak_velocity={g: values[f"group_{g}.peak_velocity"] for g in GROUP_ORDER},
        peak_acceleration={g: values[f"group_{g}.peak_acceleration"] for g in GROUP_ORDER},
        sample_period=values["sample_period"],
        noise_sigma=values["noise.sigma"],
        noise_joint6_multiplier=values["noise.joint6_multiplier"],
    )


def load_sweep(path: str | Path) -> SweepSpec:
    path = Path(path)
    return sweep_from_text(path.read_text(encoding="utf-8"), source=str(path))


def default_sweep() -> SweepSpec:
    from importlib import resources

    text = resources.files("torquelearn.resources").joinpath("sweep_default.params").read_text()
    return sweep_from_text(text, source="sweep_default.params")


@dataclass
class Sample:
    """One recorded instant: time, joint state and measured torque."""

    timestamp: float
    state: JointState
    torque: np.ndarray


@dataclass
class Dataset:
    """Ordered (state, torque) samples plus provenance metadata."""

    t: np.ndarray       # (n,)
    q: np.ndarray       # (n, 6)
    qd: np.ndarray      # (n, 6)
    qdd: np.ndarray     # (n, 6)
    tau: np.ndarray     # (n, 6)
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=np.float64)
        for name in ("q", "qd", "qdd", "tau"):
            setattr(self, name, np.asarray(getattr(self, name), dtype=np.float64))
        n = self.t.shape[0]
        for name in ("q", "qd", "qdd", "tau"):
            if getattr(self, name).shape != (n, N_JOINTS):
                raise ValueError(f"dataset column block {name} has wrong shape")

    def __len__(self) -> int:
        return int(self.t.shape[0])

    def row(self, i: int) -> Sample:
        return Sample(timestamp=float(self.t[i]),
                      state=JointState(self.q[i], self.qd[i], self.qdd[i]),
                      torque=self.tau[i].copy())

    def to_csv_text(self) -> str:
        lines = [CSV_HEADER]
        for i in range(len(self)):
            row = [self.t[i], *self.q[i], *self.qd[i], *self.qdd[i], *self.tau[i]]
            lines.append(",".join(repr(float(v)) for v in row))
        return "\n".join(lines) + "\n"

    def save_csv(self, path: str | Path) -> str:
        """Write the CSV and return its content digest."""
        text = self.to_csv_text()
        Path(path).write_text(text, encoding="utf-8", newline="\n")
        return "sha256:" + hashlib.sha256(text.encode()).hexdigest()


def dataset_from_csv_text(text: str, source: str = "<string>") -> Dataset:
    lines = text.splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"{source}: missing or malformed dataset header")
    body = [line for line in lines[1:] if line]
    if not body:
        raise ValueError(f"{source}: dataset has no rows")
    data = np.empty((len(body), N_COLUMNS))
    for i, line in enumerate(body):
        parts = line.split(",")
        if len(parts) != N_COLUMNS:
            raise ValueError(f"{source}: row {i + 2} has {len(parts)} columns, expected {N_COLUMNS}")
        try:
            data[i] = [float(p) for p in parts]
        except ValueError:
            raise ValueError(f"{source}: row {i + 2} contains a non-numeric value") from None
    require_finite("dataset", data)
    digest = "sha256:" + hashlib.sha256(text.encode()).hexdigest()
    return Dataset(t=data[:, 0], q=data[:, 1:7], qd=data[:, 7:13],
                   qdd=data[:, 13:19], tau=data[:, 19:25],
                   provenance={"csv_digest": digest})


def load_dataset(path: str | Path) -> Dataset:
    path = Path(path)
    return dataset_from_csv_text(path.read_text(encoding="utf-8"), source=str(path))


def generate_grid_sweep(model: RobotModel, spec: SweepSpec, seed: int) -> Dataset:
    """Run the full campaign and sample it on the configured clock.

    Group order is a, b, c; within a group each joint walks its grid targets
    sequentially while every other joint holds its current angle.  Each move
    contributes ceil(duration / sample_period) samples at local times
    0, h, 2h, ...; the motion clamps to its endpoint once the true duration
    has elapsed, so segment k+1 starts exactly where segment k ended.
    """
    spec.validate(model)
    rng = np.random.default_rng(seed)
    h = spec.sample_period

    current = spec.start.copy()
    t_blocks, q_blocks, qd_blocks, qdd_blocks = [], [], [], []
    t0 = 0.0
    for group in GROUP_ORDER:
        v_peak = spec.peak_velocity[group]
        a_peak = spec.peak_acceleration[group]
        for j in GROUP_JOINTS[group]:
            for target in spec.targets(j):
                duration = duration_for_move(target - current[j], v_peak, a_peak)
                n = max(1, int(math.ceil(duration / h - 1e-12)))
                local_t = np.arange(n) * h
                qj, qdj, qddj = quintic_profile(current[j], target, duration, local_t)
                Q = np.tile(current, (n, 1))
                QD = np.zeros((n, N_JOINTS))
                QDD = np.zeros((n, N_JOINTS))
                Q[:, j] = qj
                QD[:, j] = qdj
                QDD[:, j] = qddj
                t_blocks.append(t0 + local_t)
                q_blocks.append(Q)
                qd_blocks.append(QD)
                qdd_blocks.append(QDD)
                t0 += n * h
                current[j] = target

    t = np.concatenate(t_blocks)
    Q = np.vstack(q_blocks)
    QD = np.vstack(qd_blocks)
    QDD = np.vstack(qdd_blocks)
    tau = inverse_dynamics_batch(model, Q, QD, QDD, include_friction=True)
    tau = tau + rng.normal(0.0, spec.noise_std(), size=tau.shape)
    provenance = {"seed": int(seed),
                  "sweep_digest": spec.digest(),
                  "robot_digest": model.digest()}
    return Dataset(t=t, q=Q, qd=QD, qdd=QDD, tau=tau, provenance=provenance)


def shuffle(dataset: Dataset, seed: int) -> Dataset:
    """Row permutation of the dataset, deterministic for a fixed seed."""
    if len(dataset) == 0:
        raise ValueError("cannot shuffle an empty dataset")
    perm = np.random.default_rng(seed).permutation(len(dataset))
    return Dataset(t=dataset.t[perm], q=dataset.q[perm], qd=dataset.qd[perm],
                   qdd=dataset.qdd[perm], tau=dataset.tau[perm],
                   provenance={**dataset.provenance, "shuffle_seed": int(seed)})


def split(dataset: Dataset, train_fraction: float) -> tuple[Dataset, Dataset]:
    """Leading floor(n * fraction) rows to train, the rest to test."""
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train fraction must be strictly between 0 and 1")
    k = int(math.floor(len(dataset) * train_fraction))

    def _slice(lo, hi):
        return Dataset(t=dataset.t[lo:hi], q=dataset.q[lo:hi], qd=dataset.qd[lo:hi],
                       qdd=dataset.qdd[lo:hi], tau=dataset.tau[lo:hi],
                       provenance=dict(dataset.provenance))

    return _slice(0, k), _slice(k, len(dataset))


def dataset_digest(dataset: Dataset) -> str:
    """Digest of the dataset's canonical CSV representation."""
    if "csv_digest" in dataset.provenance:
        return dataset.provenance["csv_digest"]
    return "sha256:" + hashlib.sha256(dataset.to_csv_text().encode()).hexdigest()


__all__ = [
    "GROUP_ORDER", "GROUP_JOINTS", "JOINT_GROUP", "CSV_HEADER",
    "SweepSpec", "Sample", "Dataset",
    "sweep_from_text", "load_sweep", "default_sweep",
    "dataset_from_csv_text", "load_dataset",
    "generate_grid_sweep", "shuffle", "split", "dataset_digest",
]
