"""Finite-support quaternionic Laurent series on the boundary sphere.

A series stores a map n -> a_n and represents f(q) = sum_n q^n a_n.  This is
the concrete carrier for slice functions: the star product, regular
conjugation, symmetrization, Hardy projections and the L2 / Linf / BMO norm
machinery all act on it.

Coefficient convolutions and inner products are accumulated with math.fsum so
the algebraic identities (conjugation anti-homomorphism, reality of the
symmetrization, norm invariance under conjugation) hold exactly in floating
point, not just up to rounding.
"""

from __future__ import annotations

import math
from math import fsum
from typing import Callable, Iterable, Mapping

import numpy as np

from . import arrays
from .quat import (
    REFERENCE_UNIT,
    BoundaryPoint,
    ImaginaryUnit,
    Quaternion,
)

__all__ = [
    "SliceLaurentSeries",
    "evaluate",
    "extend_from_slice",
    "star_mul",
    "conj_c",
    "symmetrize",
    "recip_star_at",
    "star_eval",
    "project_plus",
    "project_minus",
    "l2_inner",
    "l2_norm",
    "sphere_sup",
    "linf_norm",
    "bmo_norm",
    "save_series",
    "load_series",
    "dumps_series",
    "loads_series",
]

_ZERO = Quaternion()


class SliceLaurentSeries:
    """Finite-support coefficient map n -> a_n.  Equality is semantic:
    stored zero coefficients are ignored."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, Quaternion] | None = None):
        self.coeffs: dict[int, Quaternion] = {}
        if coeffs:
            for n, a in coeffs.items():
                if not isinstance(a, Quaternion):
                    raise TypeError("coefficients must be quaternions")
                self.coeffs[int(n)] = a

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls) -> "SliceLaurentSeries":
        return cls()

    @classmethod
    def monomial(cls, n: int, coeff: Quaternion) -> "SliceLaurentSeries":
        return cls({n: coeff})

    @classmethod
    def constant(cls, coeff: Quaternion) -> "SliceLaurentSeries":
        return cls({0: coeff})

    # -- structure --------------------------------------------------------

    def coefficient(self, n: int) -> Quaternion:
        return self.coeffs.get(n, _ZERO)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted(n for n, a in self.coeffs.items() if a.norm_sq() != 0.0))

    @property
    def n_min(self) -> int:
        s = self.support
        return s[0] if s else 0

    @property
    def n_max(self) -> int:
        s = self.support
        return s[-1] if s else 0

    def is_zero(self) -> bool:
        return not self.support

    def __add__(self, other: "SliceLaurentSeries") -> "SliceLaurentSeries":
        out = dict(self.coeffs)
        for n, b in other.coeffs.items():
            out[n] = out.get(n, _ZERO) + b
        return SliceLaurentSeries(out)

    def __sub__(self, other: "SliceLaurentSeries") -> "SliceLaurentSeries":
        out = dict(self.coeffs)
        for n, b in other.coeffs.items():
            out[n] = out.get(n, _ZERO) - b
        return SliceLaurentSeries(out)

    def __neg__(self) -> "SliceLaurentSeries":
        return SliceLaurentSeries({n: -a for n, a in self.coeffs.items()})

    def times_right(self, c: Quaternion) -> "SliceLaurentSeries":
        """f . c, i.e. right multiplication of every coefficient by c."""
        return SliceLaurentSeries({n: a * c for n, a in self.coeffs.items()})

    def shifted(self, k: int) -> "SliceLaurentSeries":
        return SliceLaurentSeries({n + k: a for n, a in self.coeffs.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, SliceLaurentSeries):
            return NotImplemented
        keys = set(self.coeffs) | set(other.coeffs)
        return all(self.coefficient(n) == other.coefficient(n) for n in keys)

    def __hash__(self) -> int:
        return hash(tuple((n, self.coefficient(n).components()) for n in self.support))

    def __repr__(self) -> str:
        terms = ", ".join(f"{n}: {self.coefficient(n)!r}" for n in self.support)
        return f"SliceLaurentSeries({{{terms}}})"


# ---------------------------------------------------------------------------
# evaluation and the representation formula
# ---------------------------------------------------------------------------


def evaluate(f: SliceLaurentSeries, p: BoundaryPoint) -> Quaternion:
    """sum_n exp_unit(n t, I) a_n at p = e^{tI}.

    Grouped as C + I*S with C = sum cos(nt) a_n, S = sum sin(nt) a_n, which is
    the same sum with fewer quaternion products.
    """
    t = p.angle
    cw = cx = cy = cz = 0.0
    sw = sx = sy = sz = 0.0
    for n, a in f.coeffs.items():
        c = math.cos(n * t)
        s = math.sin(n * t)
        cw += c * a.w
        cx += c * a.x
        cy += c * a.y
        cz += c * a.z
        sw += s * a.w
        sx += s * a.x
        sy += s * a.y
        sz += s * a.z
    ux, uy, uz = p.unit.x, p.unit.y, p.unit.z
    return Quaternion(
        cw - ux * sx - uy * sy - uz * sz,
        cx + ux * sw + uy * sz - uz * sy,
        cy - ux * sz + uy * sw + uz * sx,
        cz + ux * sy - uy * sx + uz * sw,
    )


def extend_from_slice(
    sampler: Callable[[float], Quaternion],
    unit: ImaginaryUnit,
    target: BoundaryPoint,
) -> Quaternion:
    """Representation-formula extension from slice data on the circle of ``unit``.

    Returns (1 - JI)/2 f(e^{tI}) + (1 + JI)/2 f(e^{-tI}) with J the target unit.
    """
    t = target.angle
    fp = sampler(t)
    fm = sampler(-t)
    ji = target.unit.as_quaternion() * unit.as_quaternion()
    one = Quaternion(1.0)
    return ((one - ji) * fp + (one + ji) * fm) * 0.5


# ---------------------------------------------------------------------------
# the star algebra
# ---------------------------------------------------------------------------


def star_mul(f: SliceLaurentSeries, g: SliceLaurentSeries) -> SliceLaurentSeries:
    """Coefficient convolution c_n = sum_k a_k b_{n-k} (f's coefficients left).

    Each output component is an fsum over the fully expanded scalar products,
    so conj_c(star_mul(f, g)) == star_mul(conj_c(g), conj_c(f)) exactly.
    """
    if not f.coeffs or not g.coeffs:
        return SliceLaurentSeries.zero()
    buckets: dict[int, tuple[list, list, list, list]] = {}
    for kf, a in f.coeffs.items():
        aw, ax, ay, az = a.w, a.x, a.y, a.z
        for kg, b in g.coeffs.items():
            bw, bx, by, bz = b.w, b.x, b.y, b.z
            n = kf + kg
            bucket = buckets.get(n)
            if bucket is None:
                bucket = ([], [], [], [])
                buckets[n] = bucket
            lw, lx, ly, lz = bucket
            lw += (aw * bw, -ax * bx, -ay * by, -az * bz)
            lx += (aw * bx, ax * bw, ay * bz, -az * by)
            ly += (aw * by, -ax * bz, ay * bw, az * bx)
            lz += (aw * bz, ax * by, -ay * bx, az * bw)
    out = {
        n: Quaternion(fsum(lw), fsum(lx), fsum(ly), fsum(lz))
        for n, (lw, lx, ly, lz) in buckets.items()
    }
    return SliceLaurentSeries(out)


def conj_c(f: SliceLaurentSeries) -> SliceLaurentSeries:
    """Regular conjugate: coefficient-wise quaternion conjugation."""
    return SliceLaurentSeries({n: a.conjugate() for n, a in f.coeffs.items()})


def symmetrize(f: SliceLaurentSeries) -> SliceLaurentSeries:
    """f^s = f * f^c; real coefficients, truncated to exactly real."""
    raw = star_mul(f, conj_c(f))
    scale = fsum(a.norm_sq() for a in f.coeffs.values())
    tol = 1e-12 * max(scale, 1.0)
    out = {}
    for n, c in raw.coeffs.items():
        if c.imag_norm() > tol:
            raise ArithmeticError("symmetrization produced a non-real coefficient")
        out[n] = Quaternion(c.w)
    return SliceLaurentSeries(out)


def recip_star_at(
    f: SliceLaurentSeries, p: BoundaryPoint, tol: float = 1e-10
) -> Quaternion:
    """Pointwise star-reciprocal (f^s(p))^{-1} f^c(p)."""
    fs_val = evaluate(symmetrize(f), p)
    if abs(fs_val) <= tol:
        raise ValueError("symmetrization vanishes at point")
    return fs_val.inverse() * evaluate(conj_c(f), p)


def star_eval(
    f: SliceLaurentSeries, g: SliceLaurentSeries, p: BoundaryPoint
) -> Quaternion:
    """Pointwise star product f(p) g(f(p)^{-1} p f(p)), 0 where f vanishes."""
    fv = evaluate(f, p)
    if abs(fv) <= 1e-12:
        return Quaternion()
    moved = fv.inverse() * p.to_quaternion() * fv
    scaled = moved * (1.0 / abs(moved))
    return fv * evaluate(g, BoundaryPoint.from_quaternion(scaled))


# ---------------------------------------------------------------------------
# projections and the L2 structure
# ---------------------------------------------------------------------------


def project_plus(f: SliceLaurentSeries) -> SliceLaurentSeries:
    return SliceLaurentSeries({n: a for n, a in f.coeffs.items() if n >= 0})


def project_minus(f: SliceLaurentSeries) -> SliceLaurentSeries:
    return SliceLaurentSeries({n: a for n, a in f.coeffs.items() if n < 0})


def l2_inner(f: SliceLaurentSeries, g: SliceLaurentSeries) -> Quaternion:
    """<f, g> = sum_n conj(b_n) a_n over the joint support."""
    keys = sorted(set(f.coeffs) | set(g.coeffs))
    lw, lx, ly, lz = [], [], [], []
    for n in keys:
        a = f.coefficient(n)
        bc = g.coefficient(n).conjugate()
        pw, px, py, pz = bc.w, bc.x, bc.y, bc.z
        qw, qx, qy, qz = a.w, a.x, a.y, a.z
        lw += (pw * qw, -px * qx, -py * qy, -pz * qz)
        lx += (pw * qx, px * qw, py * qz, -pz * qy)
        ly += (pw * qy, -px * qz, py * qw, pz * qx)
        lz += (pw * qz, px * qy, -py * qx, pz * qw)
    return Quaternion(fsum(lw), fsum(lx), fsum(ly), fsum(lz))


def l2_norm(f: SliceLaurentSeries) -> float:
    return math.sqrt(fsum(
        v for n in sorted(f.coeffs)
        for v in (f.coeffs[n].w ** 2, f.coeffs[n].x ** 2,
                  f.coeffs[n].y ** 2, f.coeffs[n].z ** 2)
    ))


# ---------------------------------------------------------------------------
# sup norms
# ---------------------------------------------------------------------------


def sphere_sup(a: Quaternion, b: Quaternion) -> float:
    """sup over J in S of |a + Jb|, in closed form.

    |a + Jb|^2 = |a|^2 + |b|^2 - 2 <Im(b conj(a)), J>, maximized at
    J = -Im(b conj(a)) / |Im(b conj(a))|.
    """
    p = b * a.conjugate()
    return math.sqrt(a.norm_sq() + b.norm_sq() + 2.0 * p.imag_norm())


def _pair_arrays(f: SliceLaurentSeries):
    """Coefficients as complex pairs a_n = alpha_n + beta_n j on the reference
    slice (alpha = w + ix, beta = y + iz)."""
    ns = np.array(sorted(f.coeffs), dtype=float)
    comp = np.array([f.coeffs[int(n)].components() for n in ns], dtype=float)
    if comp.size == 0:
        comp = np.zeros((0, 4))
    alpha = comp[:, 0] + 1j * comp[:, 1]
    beta = comp[:, 2] + 1j * comp[:, 3]
    return ns, alpha, beta


def _reference_samples(f: SliceLaurentSeries, grid: int):
    """Samples of f at e^{it_k} and e^{-it_k}, t_k = 2 pi k / grid, as complex
    pairs (A+, B+, A-, B-)."""
    t = 2.0 * np.pi * np.arange(grid) / grid
    ns, alpha, beta = _pair_arrays(f)
    if ns.size == 0:
        z = np.zeros(grid, dtype=complex)
        return z, z.copy(), z.copy(), z.copy()
    phase = np.exp(1j * np.outer(t, ns))
    ap = phase @ alpha
    bp = phase @ beta
    am = np.conj(phase) @ alpha
    bm = np.conj(phase) @ beta
    return ap, bp, am, bm


def _sup_values(ap, bp, am, bm):
    """Pointwise sup over J of |f(e^{tJ})| from the +/- reference samples.

    With a = (f+ + f-)/2 and b = (i/2)(f- - f+) the closed-form sphere sup
    reduces to |f+|^2,|f-|^2 cross terms; see sphere_sup.
    """
    s1 = np.abs(ap) ** 2
    s2 = np.abs(am) ** 2
    s3 = np.abs(bp) ** 2
    s4 = np.abs(bm) ** 2
    base = 0.5 * (s1 + s2 + s3 + s4)
    im_p = 0.25 * ((s2 - s1) + (s4 - s3))
    qc = ap * bm - am * bp
    im_sq = im_p ** 2 + 0.25 * np.abs(qc) ** 2
    return np.sqrt(base + 2.0 * np.sqrt(im_sq))


def _grid_guard(f: SliceLaurentSeries, grid: int) -> None:
    sup = f.support
    max_idx = max(abs(sup[0]), abs(sup[-1])) if sup else 0
    if grid < 4 * max_idx + 16:
        raise ValueError(
            f"grid {grid} too coarse for support up to |n| = {max_idx}; "
            f"need at least {4 * max_idx + 16}"
        )


def linf_norm(f: SliceLaurentSeries, grid: int = 4096) -> float:
    """Sampled essential sup: max over a uniform angle grid of the exact
    sphere sup on each sphere e^{t S}.  A lower bound converging as the grid
    is refined."""
    _grid_guard(f, grid)
    if f.is_zero():
        return 0.0
    vals = _sup_values(*_reference_samples(f, grid))
    return float(np.max(vals))


# ---------------------------------------------------------------------------
# BMO
# ---------------------------------------------------------------------------


def _slice_sample_values(f: SliceLaurentSeries, unit: ImaginaryUnit, grid: int) -> np.ndarray:
    """f(e^{t_k I}) for t_k = 2 pi k / grid, as a (grid, 4) component array."""
    t = 2.0 * np.pi * np.arange(grid) / grid
    ns = np.array(sorted(f.coeffs), dtype=float)
    if ns.size == 0:
        return np.zeros((grid, 4))
    comp = np.array([f.coeffs[int(n)].components() for n in ns], dtype=float)
    phase = np.exp(1j * np.outer(t, ns))
    c = phase.real @ comp
    s = phase.imag @ comp
    uq = np.array([0.0, unit.x, unit.y, unit.z])
    return c + arrays.mul(np.broadcast_to(uq, s.shape), s)


def bmo_norm(
    f: SliceLaurentSeries,
    n_units: int = 64,
    n_arcs: int = 8,
    grid: int = 4096,
) -> float:
    """Sampled mean-oscillation sup over slices and dyadic arcs.

    Slices: the reference slice plus ``n_units`` deterministic sphere samples.
    Arcs: lengths 2 pi 2^{-m} for m = 0..n_arcs, offsets at half-arc spacing,
    wrap-around included.  Inner integrals use the trapezoid rule on the
    sample grid, so the value is a lower bound of the true BMO norm.
    """
    if n_units < 0 or n_arcs < 0 or grid < 16:
        raise ValueError("sampling parameters must be positive")
    from .quat import sample_sphere

    rng = np.random.default_rng(0)
    units = [REFERENCE_UNIT] + [sample_sphere(rng) for _ in range(n_units)]
    dt = 2.0 * np.pi / grid
    best = 0.0
    for unit in units:
        vals = _slice_sample_values(f, unit, grid)
        ext = np.concatenate([vals, vals[:1]], axis=0)
        for m in range(min(n_arcs, 8) + 1):
            npts = grid >> m
            if npts < 4:
                break
            length = npts * dt
            step = max(1, npts // 2)
            for start in range(0, grid, step):
                idx = (start + np.arange(npts + 1)) % grid
                window = ext[idx]
                mean = np.trapezoid(window, dx=dt, axis=0) / length
                dev = np.sqrt(np.sum((window - mean) ** 2, axis=1))
                osc = float(np.trapezoid(dev, dx=dt) / length)
                if osc > best:
                    best = osc
    return best


# ---------------------------------------------------------------------------
# serialization: records {n, w, x, y, z}, bit-exact round trip
# ---------------------------------------------------------------------------


def dumps_series(f: SliceLaurentSeries) -> str:
    lines = ["# slice laurent series: n w x y z"]
    for n in sorted(f.coeffs):
        a = f.coeffs[n]
        lines.append(f"{n} {a.w!r} {a.x!r} {a.y!r} {a.z!r}")
    return "\n".join(lines) + "\n"


def loads_series(text: str) -> SliceLaurentSeries:
    coeffs: dict[int, Quaternion] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 5:
            raise ValueError(f"record at line {lineno}: expected 'n w x y z', got {raw!r}")
        try:
            n = int(parts[0])
            w, x, y, z = (float(p) for p in parts[1:])
        except ValueError as exc:
            raise ValueError(f"record at line {lineno}: {exc}") from None
        coeffs[n] = Quaternion(w, x, y, z)
    return SliceLaurentSeries(coeffs)


def save_series(f: SliceLaurentSeries, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_series(f))


def load_series(path) -> SliceLaurentSeries:
    with open(path) as fh:
        return loads_series(fh.read())
