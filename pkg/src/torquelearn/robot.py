"""Rigid-body model of a 6-joint serial arm and its on-disk parameter format.

Kinematics use the modified Denavit-Hartenberg convention: frame i is attached
to link i with the joint-i axis along z_i, and the transform from frame i-1 to
frame i is

    Rot_x(alpha[i-1]) . Trans_x(a[i-1]) . Rot_z(q_i + theta_offset[i]) . Trans_z(d[i])

so ``dh_a[i]`` and ``dh_alpha[i]`` are the a/alpha parameters *preceding*
joint i+1 (0-based storage).  README.md carries the full frame table for the
bundled default arm.

The parameter file is plain text, one ``key = value`` pair per scalar
(``link3.mass``, ``joint2.viscous``, ...).  Parsing is strict: every known key
must appear exactly once and unknown keys are rejected.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

N_JOINTS = 6

_COM_AXES = ("com_x", "com_y", "com_z")
_INERTIA_KEYS = ("ixx", "iyy", "izz", "ixy", "ixz", "iyz")
_JOINT_KEYS = ("a", "alpha", "d", "theta_offset", "viscous", "coulomb",
               "deadzone", "q_min", "q_max")


@dataclass
class RobotModel:
    """Inertial, kinematic and friction parameters of a 6-joint serial chain.

    All arrays are float64.  ``inertias[i]`` is the link-i inertia tensor
    about the link's own centre of mass, expressed in the link frame.
    """

    masses: np.ndarray            # (6,) kg
    coms: np.ndarray              # (6, 3) m, COM offset in link frame
    inertias: np.ndarray          # (6, 3, 3) kg m^2, about COM
    dh_a: np.ndarray              # (6,) m
    dh_alpha: np.ndarray          # (6,) rad
    dh_d: np.ndarray              # (6,) m
    dh_theta: np.ndarray          # (6,) rad, joint angle offset
    viscous: np.ndarray           # (6,) N m s/rad
    coulomb: np.ndarray           # (6,) N m
    deadzone: np.ndarray          # (6,) rad/s, half-width of zero-output band
    gravity: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, -9.80665]))
    q_min: np.ndarray = field(default_factory=lambda: np.full(N_JOINTS, -np.pi))
    q_max: np.ndarray = field(default_factory=lambda: np.full(N_JOINTS, np.pi))

    def __post_init__(self):
        self.masses = np.asarray(self.masses, dtype=np.float64).reshape(N_JOINTS)
        self.coms = np.asarray(self.coms, dtype=np.float64).reshape(N_JOINTS, 3)
        self.inertias = np.asarray(self.inertias, dtype=np.float64).reshape(N_JOINTS, 3, 3)
        for name in ("dh_a", "dh_alpha", "dh_d", "dh_theta", "viscous",
                     "coulomb", "deadzone", "q_min", "q_max"):
            setattr(self, name, np.asarray(getattr(self, name), dtype=np.float64).reshape(N_JOINTS))
        self.gravity = np.asarray(self.gravity, dtype=np.float64).reshape(3)

    def validate(self) -> None:
        """Check physical plausibility; raises ValueError naming the culprit."""
        for i in range(N_JOINTS):
            if not self.masses[i] > 0.0:
                raise ValueError(f"link {i + 1} mass must be > 0, got {self.masses[i]}")
            tensor = self.inertias[i]
            if not np.allclose(tensor, tensor.T, atol=1e-12):
                raise ValueError(f"link {i + 1} inertia tensor is not symmetric")
            eigs = np.linalg.eigvalsh(tensor)
            if not (eigs > 0.0).all():
                raise ValueError(f"link {i + 1} inertia tensor is not positive-definite")
            # principal moments of a rigid body obey the triangle inequality
            for k in range(3):
                if eigs[k] > eigs[(k + 1) % 3] + eigs[(k + 2) % 3] + 1e-12:
                    raise ValueError(
                        f"link {i + 1} principal moments violate the triangle inequality"
                    )
            if self.viscous[i] < 0.0 or self.coulomb[i] < 0.0:
                raise ValueError(f"joint {i + 1} friction coefficients must be >= 0")
            if self.deadzone[i] < 0.0:
                raise ValueError(f"joint {i + 1} dead-zone half-width must be >= 0")
            if not self.q_min[i] < self.q_max[i]:
                raise ValueError(f"joint {i + 1} position limits are not ordered")
        if not np.isfinite(self.gravity).all():
            raise ValueError("gravity vector is not finite")

    def to_text(self) -> str:
        """Serialize to the canonical parameter-file text."""
        lines = ["# torquelearn robot parameters"]
        for axis, value in zip("xyz", self.gravity):
            lines.append(f"gravity.{axis} = {float(value)!r}")
        for i in range(N_JOINTS):
            lines.append(f"link{i + 1}.mass = {float(self.masses[i])!r}")
            for axis, value in zip(_COM_AXES, self.coms[i]):
                lines.append(f"link{i + 1}.{axis} = {float(value)!r}")
            tensor = self.inertias[i]
            values = (tensor[0, 0], tensor[1, 1], tensor[2, 2],
                      tensor[0, 1], tensor[0, 2], tensor[1, 2])
            for key, value in zip(_INERTIA_KEYS, values):
                lines.append(f"link{i + 1}.{key} = {float(value)!r}")
        arrays = (self.dh_a, self.dh_alpha, self.dh_d, self.dh_theta,
                  self.viscous, self.coulomb, self.deadzone, self.q_min, self.q_max)
        for i in range(N_JOINTS):
            for key, arr in zip(_JOINT_KEYS, arrays):
                lines.append(f"joint{i + 1}.{key} = {float(arr[i])!r}")
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        return "sha256:" + hashlib.sha256(self.to_text().encode()).hexdigest()


def expected_param_keys() -> list[str]:
    """The complete key set a robot parameter file must define."""
    keys = [f"gravity.{axis}" for axis in "xyz"]
    for i in range(N_JOINTS):
        keys.append(f"link{i + 1}.mass")
        keys.extend(f"link{i + 1}.{axis}" for axis in _COM_AXES)
        keys.extend(f"link{i + 1}.{key}" for key in _INERTIA_KEYS)
    for i in range(N_JOINTS):
        keys.extend(f"joint{i + 1}.{key}" for key in _JOINT_KEYS)
    return keys


def parse_key_values(text: str, source: str = "<string>") -> dict[str, float]:
    """Parse ``key = value`` lines; '#' starts a comment, blanks are skipped."""
    values: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value_text = line.partition("=")
        key = key.strip()
        if key in values:
            raise ValueError(f"{source}:{lineno}: duplicate key {key!r}")
        try:
            value = float(value_text.strip())
        except ValueError:
            raise ValueError(f"{source}:{lineno}: value for {key!r} is not a number") from None
        if not math.isfinite(value):
            raise ValueError(f"{source}:{lineno}: value for {key!r} is not finite")
        values[key] = value
    return values


def robot_from_text(text: str, source: str = "<string>") -> RobotModel:
    values = parse_key_values(text, source)
    expected = expected_param_keys()
    unknown = sorted(set(values) - set(expected))
    if unknown:
        raise ValueError(f"{source}: unknown key(s): {', '.join(unknown)}")
    missing = [k for k in expected if k not in values]
    if missing:
        raise ValueError(f"{source}: missing key(s): {', '.join(missing)}")

    masses = np.array([values[f"link{i + 1}.mass"] for i in range(N_JOINTS)])
    coms = np.array([[values[f"link{i + 1}.{axis}"] for axis in _COM_AXES]
                     for i in range(N_JOINTS)])
    inertias = np.zeros((N_JOINTS, 3, 3))
    for i in range(N_JOINTS):
        ixx, iyy, izz, ixy, ixz, iyz = (values[f"link{i + 1}.{key}"] for key in _INERTIA_KEYS)
        inertias[i] = [[ixx, ixy, ixz], [ixy, iyy, iyz], [ixz, iyz, izz]]
    joint_cols = {key: np.array([values[f"joint{i + 1}.{key}"] for i in range(N_JOINTS)])
                  for key in _JOINT_KEYS}

    model = RobotModel(
        masses=masses, coms=coms, inertias=inertias,
        dh_a=joint_cols["a"], dh_alpha=joint_cols["alpha"], dh_d=joint_cols["d"],
        dh_theta=joint_cols["theta_offset"],
        viscous=joint_cols["viscous"], coulomb=joint_cols["coulomb"],
        deadzone=joint_cols["deadzone"],
        gravity=np.array([values[f"gravity.{axis}"] for axis in "xyz"]),
        q_min=joint_cols["q_min"], q_max=joint_cols["q_max"],
    )
    model.validate()
    return model


def load_robot(path: str | Path) -> RobotModel:
    path = Path(path)
    return robot_from_text(path.read_text(encoding="utf-8"), source=str(path))


def save_robot(model: RobotModel, path: str | Path) -> None:
    Path(path).write_text(model.to_text(), encoding="utf-8")


def default_robot() -> RobotModel:
    """The bundled synthetic 6-DoF arm (see resources/arm6_default.params)."""
    text = resources.files("torquelearn.resources").joinpath("arm6_default.params").read_text()
    return robot_from_text(text, source="arm6_default.params")
