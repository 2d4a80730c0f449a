"""Vectorized quaternion arithmetic on float arrays of shape (..., 4)."""

from __future__ import annotations

import numpy as np

from .quat import Quaternion


def as_array(values) -> np.ndarray:
    """Stack quaternions (or nested sequences of them) into an (..., 4) array."""
    if isinstance(values, Quaternion):
        return np.array(values.components(), dtype=float)
    if isinstance(values, np.ndarray):
        return values.astype(float, copy=False)
    return np.array([as_array(v) for v in values], dtype=float)


def to_quaternions(arr: np.ndarray) -> list[Quaternion]:
    arr = np.asarray(arr, dtype=float)
    if arr.ndim == 1:
        return [Quaternion(*arr)]
    return [Quaternion(*row) for row in arr.reshape(-1, 4)]


def mul(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Hamilton product, broadcasting over leading axes."""
    pw, px, py, pz = p[..., 0], p[..., 1], p[..., 2], p[..., 3]
    qw, qx, qy, qz = q[..., 0], q[..., 1], q[..., 2], q[..., 3]
    return np.stack(
        [
            pw * qw - px * qx - py * qy - pz * qz,
            pw * qx + px * qw + py * qz - pz * qy,
            pw * qy - px * qz + py * qw + pz * qx,
            pw * qz + px * qy - py * qx + pz * qw,
        ],
        axis=-1,
    )


def conj(p: np.ndarray) -> np.ndarray:
    out = np.array(p, dtype=float, copy=True)
    out[..., 1:] = -out[..., 1:]
    return out


def norm_sq(p: np.ndarray) -> np.ndarray:
    return np.sum(np.square(p), axis=-1)


def norm(p: np.ndarray) -> np.ndarray:
    return np.sqrt(norm_sq(p))


def inv(p: np.ndarray) -> np.ndarray:
    n2 = norm_sq(p)
    return conj(p) / n2[..., None]
