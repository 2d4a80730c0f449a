"""Truncated Hankel operators as quaternion matrices, the complex embedding,
operator norms via SVD, the bilinear form and the shift machinery."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import arrays
from .quat import Quaternion
from .series import SliceLaurentSeries, project_minus, star_mul

__all__ = [
    "QuaternionMatrix",
    "HankelOperator",
    "apply_gamma",
    "build_hankel_matrix",
    "hankel_from_symbol",
    "apply_H",
    "bilinear_form",
    "complex_embed",
    "embed_vector",
    "deembed_vector",
    "operator_norm",
    "shift_S",
    "shift_S_adj",
    "shift_T",
    "shift_T_adj",
    "commutation_residual",
    "dump_matrix",
    "load_matrix",
]


class QuaternionMatrix:
    """Dense quaternion matrix stored as a (rows, cols, 4) float array."""

    __slots__ = ("data",)

    def __init__(self, data):
        data = np.asarray(data, dtype=float)
        if data.ndim != 3 or data.shape[2] != 4:
            raise ValueError("expected an array of shape (rows, cols, 4)")
        if not np.all(np.isfinite(data)):
            raise ValueError("matrix entries must be finite")
        self.data = data

    @classmethod
    def from_entries(cls, entries: Sequence[Sequence[Quaternion]]) -> "QuaternionMatrix":
        return cls(np.array(
            [[q.components() for q in row] for row in entries], dtype=float
        ).reshape(len(entries), len(entries[0]), 4))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QuaternionMatrix":
        return cls(np.zeros((rows, cols, 4)))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def entry(self, j: int, k: int) -> Quaternion:
        return Quaternion(*self.data[j, k])

    def matmul(self, other: "QuaternionMatrix") -> "QuaternionMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        prod = arrays.mul(self.data[:, :, None, :], other.data[None, :, :, :])
        return QuaternionMatrix(prod.sum(axis=1))

    def apply(self, vec: np.ndarray) -> np.ndarray:
        """Matrix times a quaternion column vector of shape (cols, 4)."""
        vec = np.asarray(vec, dtype=float)
        prod = arrays.mul(self.data, vec[None, :, :])
        return prod.sum(axis=1)

    def frobenius(self) -> float:
        return float(np.sqrt(np.sum(np.square(self.data))))

    def __eq__(self, other) -> bool:
        if not isinstance(other, QuaternionMatrix):
            return NotImplemented
        return self.data.shape == other.data.shape and bool(np.all(self.data == other.data))

    def __repr__(self) -> str:
        return f"QuaternionMatrix(shape={self.data.shape[:2]})"


@dataclass(frozen=True)
class HankelOperator:
    """Antidiagonal data alpha(0), alpha(1), ... with a truncation size."""

    alpha: tuple[Quaternion, ...]
    N: int

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("truncation size must be >= 1")

    def matrix(self) -> QuaternionMatrix:
        return build_hankel_matrix(self.alpha, self.N)


def _alpha_at(alpha, m: int) -> Quaternion:
    if 0 <= m < len(alpha):
        return alpha[m]
    return Quaternion()


def apply_gamma(alpha: Sequence[Quaternion], v: Sequence[Quaternion]) -> list[Quaternion]:
    """(Gamma_alpha v)(j) = sum_k alpha(j+k) v(k), alpha on the left."""
    out = []
    for j in range(len(alpha)):
        acc = Quaternion()
        for k, vk in enumerate(v):
            acc = acc + _alpha_at(alpha, j + k) * vk
        out.append(acc)
    return out


def build_hankel_matrix(alpha: Sequence[Quaternion], N: int) -> QuaternionMatrix:
    """M[j][k] = alpha(j+k) for 0 <= j, k < N."""
    if N < 1:
        raise ValueError("truncation size must be >= 1")
    data = np.zeros((N, N, 4))
    for m in range(min(len(alpha), 2 * N - 1)):
        comp = alpha[m].components()
        for j in range(max(0, m - N + 1), min(m, N - 1) + 1):
            data[j, m - j] = comp
    return QuaternionMatrix(data)


def hankel_from_symbol(phi: SliceLaurentSeries, N: int) -> HankelOperator:
    """Antidiagonal data alpha(m) = phi_hat(-1-m), so entry (j,k) = phi_hat(-1-j-k)."""
    alpha = tuple(phi.coefficient(-1 - m) for m in range(2 * N - 1))
    return HankelOperator(alpha=alpha, N=N)


def apply_H(phi: SliceLaurentSeries, f: SliceLaurentSeries) -> SliceLaurentSeries:
    """H_phi f = P_-(phi * f) for f in the Hardy space."""
    if f.n_min < 0:
        raise ValueError("input must be supported in n >= 0")
    return project_minus(star_mul(phi, f))


def bilinear_form(
    alpha: Sequence[Quaternion], a: Sequence[Quaternion], b: Sequence[Quaternion]
) -> Quaternion:
    """G_alpha(a, b) = sum_n sum_k alpha(n+k) a_k b_n, products left to right."""
    acc = Quaternion()
    for n, bn in enumerate(b):
        for k, ak in enumerate(a):
            acc = acc + _alpha_at(alpha, n + k) * ak * bn
    return acc


# ---------------------------------------------------------------------------
# complex embedding H -> M_2(C)
# ---------------------------------------------------------------------------


def complex_embed(m: QuaternionMatrix) -> np.ndarray:
    """Entrywise block [[z1, z2], [-conj(z2), conj(z1)]] for q = z1 + z2 j."""
    d = m.data
    z1 = d[:, :, 0] + 1j * d[:, :, 1]
    z2 = d[:, :, 2] + 1j * d[:, :, 3]
    out = np.empty((2 * m.rows, 2 * m.cols), dtype=complex)
    out[0::2, 0::2] = z1
    out[0::2, 1::2] = z2
    out[1::2, 0::2] = -np.conj(z2)
    out[1::2, 1::2] = np.conj(z1)
    return out


def embed_vector(vec: np.ndarray) -> np.ndarray:
    """Quaternion column (n, 4) -> complex column (2n,), the first block column."""
    vec = np.asarray(vec, dtype=float)
    z1 = vec[:, 0] + 1j * vec[:, 1]
    z2 = vec[:, 2] + 1j * vec[:, 3]
    out = np.empty(2 * vec.shape[0], dtype=complex)
    out[0::2] = z1
    out[1::2] = -np.conj(z2)
    return out


def deembed_vector(u: np.ndarray) -> np.ndarray:
    """Inverse of embed_vector: complex (2n,) -> quaternion (n, 4)."""
    u = np.asarray(u, dtype=complex)
    z1 = u[0::2]
    z2 = -np.conj(u[1::2])
    return np.stack([z1.real, z1.imag, z2.real, z2.imag], axis=1)


def operator_norm(m: QuaternionMatrix) -> float:
    """Largest singular value, i.e. sup ||Mv|| / ||v|| over quaternion vectors.

    Computed as the top singular value of the complex embedding; the embedding
    is a norm-preserving bijection on column vectors, so the two sups agree.
    """
    if m.rows == 0 or m.cols == 0:
        return 0.0
    sv = np.linalg.svd(complex_embed(m), compute_uv=False)
    return float(sv[0])


# ---------------------------------------------------------------------------
# shifts
# ---------------------------------------------------------------------------


def shift_S(f: SliceLaurentSeries) -> SliceLaurentSeries:
    """Bilateral shift (Sf)(q) = q f(q)."""
    return f.shifted(1)


def shift_S_adj(f: SliceLaurentSeries) -> SliceLaurentSeries:
    """(S* f)(q) = conj(q) * f(q)."""
    return f.shifted(-1)


def shift_T(f: SliceLaurentSeries) -> SliceLaurentSeries:
    """Right shift on the Hardy space."""
    if f.n_min < 0:
        raise ValueError("input must be supported in n >= 0")
    return f.shifted(1)


def shift_T_adj(f: SliceLaurentSeries) -> SliceLaurentSeries:
    """Backward shift: drop f_hat(0) and shift down."""
    if f.n_min < 0:
        raise ValueError("input must be supported in n >= 0")
    return SliceLaurentSeries({n - 1: a for n, a in f.coeffs.items() if n >= 1})


def commutation_residual(r: QuaternionMatrix) -> float:
    """Frobenius norm of (P_- S R - R T) on the interior truncation block.

    Rows index frequencies -1..-N, columns 0..N-1.  On the interior the
    identity reads R[j+1][k] = R[j][k+1]; the last row and column are dropped
    because the infinite-matrix identity fails on the truncation boundary.
    """
    if r.rows != r.cols:
        raise ValueError("square truncation required")
    if r.rows < 2:
        return 0.0
    diff = r.data[1:, :-1] - r.data[:-1, 1:]
    return float(np.sqrt(np.sum(np.square(diff))))


# ---------------------------------------------------------------------------
# matrix dump format
# ---------------------------------------------------------------------------


def dump_matrix(m: QuaternionMatrix) -> str:
    lines = [f"matrix {m.rows} {m.cols}"]
    for j in range(m.rows):
        parts = []
        for k in range(m.cols):
            w, x, y, z = (float(v) for v in m.data[j, k])
            parts.append(f"{w!r} {x!r} {y!r} {z!r}")
        lines.append("  ".join(parts))
    return "\n".join(lines) + "\n"


def load_matrix(text: str) -> QuaternionMatrix:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("matrix"):
        raise ValueError("missing matrix header")
    _, rows_s, cols_s = lines[0].split()
    rows, cols = int(rows_s), int(cols_s)
    if len(lines) != rows + 1:
        raise ValueError(f"expected {rows} data rows, found {len(lines) - 1}")
    data = np.zeros((rows, cols, 4))
    for j in range(rows):
        vals = [float(p) for p in lines[j + 1].split()]
        if len(vals) != 4 * cols:
            raise ValueError(f"row {j}: expected {4 * cols} floats, found {len(vals)}")
        data[j] = np.array(vals).reshape(cols, 4)
    return QuaternionMatrix(data)
