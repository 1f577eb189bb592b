"""Monomial automorphisms of superelliptic curves paired with ambient isometries."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .integrator import Cycle, Mapped, PathSegment


@dataclass(frozen=True)
class SymmetryOp:
    """``kappa(z, w) = (alpha z^zpow, beta z^wz_pow w^wpow)``, preceded by
    complex conjugation of ``(z, w)`` when ``anti`` is set.

    The surface is expected to satisfy ``f(kappa(p)) = O f(p) + v``.
    """

    name: str
    matrix: np.ndarray
    alpha: complex = 1.0
    zpow: int = 1
    beta: complex = 1.0
    wz_pow: int = 0
    wpow: int = 1
    anti: bool = False
    translation: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.shape != (3, 3) or not np.allclose(m.T @ m, np.eye(3), atol=1e-12):
            raise ValueError(f"{self.name}: ambient matrix is not orthogonal")
        if self.zpow not in (1, -1) or self.wpow not in (1, -1):
            raise ValueError(f"{self.name}: only z -> z^(+-1), w -> w^(+-1) maps are supported")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "translation", np.asarray(self.translation, dtype=float))

    def map_z(self, z):
        z = np.asarray(z, dtype=complex)
        if self.anti:
            z = np.conj(z)
        return self.alpha * z ** self.zpow

    def dmap_z(self, z):
        """Derivative of the holomorphic part ``alpha z^zpow`` (after conjugation)."""
        return self.alpha * self.zpow * np.asarray(z, dtype=complex) ** (self.zpow - 1)

    def map_w(self, z, w):
        z = np.asarray(z, dtype=complex)
        w = np.asarray(w, dtype=complex)
        if self.anti:
            z, w = np.conj(z), np.conj(w)
        return self.beta * z ** self.wz_pow * w ** self.wpow

    def __call__(self, z, w):
        return self.map_z(z), self.map_w(z, w)

    def with_translation(self, v) -> "SymmetryOp":
        return SymmetryOp(self.name, self.matrix, self.alpha, self.zpow, self.beta,
                          self.wz_pow, self.wpow, self.anti, np.asarray(v, dtype=float))

    def preserves(self, curve, samples: int = 32, seed: int = 0, tol: float = 1e-9) -> bool:
        """Numerical check that ``kappa`` maps the curve to itself."""
        rng = np.random.default_rng(seed)
        z = rng.normal(size=samples) + 1j * rng.normal(size=samples)
        w = curve.sheet_values(z)[0]
        z2, w2 = self(z, w)
        lhs = w2 ** curve.sheets
        rhs = curve.rhs(z2)
        return bool(np.all(np.abs(lhs - rhs) <= tol * (1 + np.abs(rhs))))


IDENTITY = SymmetryOp("id", np.eye(3))


def image_segment(op: SymmetryOp, seg: PathSegment) -> PathSegment:
    """The path ``kappa(seg)`` with its starting branch carried along."""
    fz = lambda z: op.alpha * z ** op.zpow  # noqa: E731
    pieces = tuple(Mapped(p, fz, op.dmap_z, op.anti) for p in seg.pieces)
    w0 = complex(op.map_w(seg.start, seg.start_w))
    if isinstance(seg, Cycle):
        return Cycle(pieces, w0, f"{op.name}({seg.label})")
    return PathSegment(pieces, w0)


def rotation_z(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
