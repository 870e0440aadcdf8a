"""Shared input-checking helpers.

Every public entry point funnels its array arguments through these so that
error messages are uniform and always name the offending quantity (and,
for per-joint vectors, the offending joint).
"""

from __future__ import annotations

import numpy as np


def as_vector(name: str, value, size: int | None = None) -> np.ndarray:
    """Coerce to a 1-D float64 array, optionally enforcing the length."""
    arr = np.asarray(value, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be a 1-D vector, got shape {arr.shape}")
    if size is not None and arr.shape[0] != size:
        raise ValueError(f"{name} must have length {size}, got {arr.shape[0]}")
    return arr


def as_matrix(name: str, value, n_cols: int | None = None) -> np.ndarray:
    """Coerce to a 2-D float64 array, optionally enforcing the column count."""
    arr = np.asarray(value, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be a 2-D matrix, got shape {arr.shape}")
    if n_cols is not None and arr.shape[1] != n_cols:
        raise ValueError(f"{name} must have {n_cols} columns, got {arr.shape[1]}")
    return arr


def require_finite(name: str, arr: np.ndarray, per_joint: bool = False) -> None:
    """Reject NaN/inf entries.

    With ``per_joint=True`` the array's last axis indexes joints and the
    diagnostic names the first offending joint (1-based).
    """
    if np.isfinite(arr).all():
        return
    if per_joint:
        flat = np.asarray(arr)
        bad = np.argwhere(~np.isfinite(flat))
        joint = int(bad[0][-1]) + 1
        raise ValueError(f"{name} is not finite at joint {joint}")
    raise ValueError(f"{name} contains non-finite values")


def require_rows_match(name_x: str, x: np.ndarray, name_y: str, y: np.ndarray) -> None:
    if x.shape[0] != y.shape[0]:
        raise ValueError(
            f"{name_x} and {name_y} must have the same number of rows "
            f"({x.shape[0]} vs {y.shape[0]})"
        )
