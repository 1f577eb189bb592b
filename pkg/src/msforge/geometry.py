"""Surface-level quantities: the immersion on a grid, meshes, curvature,
end data, symmetries and the geodesic on the fixed set of a reflection."""

from __future__ import annotations

import json
import math
import struct
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .curve import CurvePoint, Place, as_sum, degree, local_order, residue
from .integrator import WeierstrassData, integrate_over, path_to, special_points
from .symmetry import IDENTITY, SymmetryOp

_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)
CHORD_TOL = 1e-13
MAX_PANELS = 256


class TornMeshError(RuntimeError):
    """Raised when periods do not close and the caller did not force meshing."""


# --------------------------------------------------------------------------
# pointwise quantities


def g_prime(g, z, w, curve):
    """``dg/dz`` at curve points."""
    out = 0
    for m in as_sum(g).terms:
        out = out + m.evaluate(z, w) * m.log_derivative(z, curve)
    return out


def eta_density(eta, z, w):
    """``eta / dz``."""
    return as_sum(eta).evaluate(z, w)


def gauss_map(g_val) -> np.ndarray:
    """Inverse stereographic projection of ``g``; last axis holds the vector."""
    g_val = np.asarray(g_val, dtype=complex)
    m = np.abs(g_val) ** 2
    return np.stack([2 * g_val.real, 2 * g_val.imag, m - 1], axis=-1) / (m + 1)[..., None]


def conformal_factor(data: WeierstrassData, z, w):
    """Metric factor ``(1 + |g|^2) |eta/dz|``; ``ds = factor * |dz|``."""
    gv = as_sum(data.g).evaluate(z, w)
    return (1 + np.abs(gv) ** 2) * np.abs(eta_density(data.eta, z, w))


def gauss_curvature(data: WeierstrassData, z, w):
    """``K = -4 |g'|^2 / (|eta/dz|^2 (1 + |g|^2)^4)``."""
    gv = as_sum(data.g).evaluate(z, w)
    gp = g_prime(data.g, z, w, data.curve)
    e = eta_density(data.eta, z, w)
    return -4 * np.abs(gp) ** 2 / (np.abs(e) ** 2 * (1 + np.abs(gv) ** 2) ** 4)


# --------------------------------------------------------------------------
# chord integration


def _continue_chord(curve, z0, w0, z1):
    """Exact continuation of ``w`` along straight chords (vectorized).

    Along a segment that avoids ``r`` the argument of ``z - r`` changes by
    less than ``pi``, so principal logarithms of ratios are the continuation.
    """
    if not curve.factors:
        return np.broadcast_to(w0, np.broadcast(z0, z1, w0).shape).astype(complex)
    acc = 0
    for r, e in curve.factors:
        acc = acc + e * np.log((z1 - complex(r)) / (z0 - complex(r)))
    return w0 * np.exp(acc / curve.sheets)


def _chord_integral_fixed(data, z0, w0, z1, panels):
    """``int Phi`` over chords with ``panels`` Gauss-Legendre panels; shape ``(3, n)``."""
    curve = data.curve
    edges = np.linspace(0.0, 1.0, panels + 1)
    half = 0.5 * np.diff(edges)
    nodes = (0.5 * (edges[1:] + edges[:-1])[:, None] + half[:, None] * _GL_X).ravel()
    weights = (half[:, None] * _GL_W).ravel()
    zk = z0[:, None] + (z1 - z0)[:, None] * nodes[None, :]
    wk = _continue_chord(curve, z0[:, None], w0[:, None], zk)
    vals = data.phi.evaluate(zk, wk)
    return (vals @ weights) * (z1 - z0)[None, :]


def chord_integrals(data, z0, w0, z1, tol=CHORD_TOL, max_panels=MAX_PANELS):
    """Adaptive chord integrals; returns ``(values (3, n), converged mask)``."""
    z0 = np.asarray(z0, dtype=complex).ravel()
    w0 = np.asarray(w0, dtype=complex).ravel()
    z1 = np.asarray(z1, dtype=complex).ravel()
    n = z0.size
    out = np.full((3, n), np.nan, dtype=complex)
    ok = np.zeros(n, dtype=bool)
    pending = np.arange(n)
    if n == 0:
        return out, ok
    prev = _chord_integral_fixed(data, z0, w0, z1, 1)
    panels = 2
    while pending.size and panels <= max_panels:
        cur = _chord_integral_fixed(data, z0[pending], w0[pending], z1[pending], panels)
        scale = 1.0 + np.max(np.abs(cur), axis=0)
        done = np.max(np.abs(cur - prev), axis=0) <= tol * scale
        out[:, pending[done]] = cur[:, done]
        ok[pending[done]] = True
        pending = pending[~done]
        prev = cur[:, ~done]
        panels *= 2
    return out, ok


# --------------------------------------------------------------------------
# the immersion on a log-polar grid


@dataclass
class GridSpec:
    nu: int = 48
    ntheta: int = 64
    umax: float = 4.0

    def __post_init__(self):
        if self.nu < 2 or self.ntheta < 2:
            raise ValueError("grid resolution must be at least 2x2")
        if self.nu % 2:
            self.nu += 1  # keep |z| = 1 off the grid


class SurfaceField:
    """``f`` at every node of an ``N``-sheeted log-polar grid around ``z = 0``.

    Node ``(i, j, s)`` sits at ``z = exp(u_i + i theta_j)`` on the sheet where
    ``w = curve.sheet_values(z)[s]``.  Values are accumulated along a
    breadth-first spanning tree whose edges are straight chords between
    grid neighbours; chords too close to a special point are left out of
    the tree.  Arbitrary points are then reached by one extra chord from a
    nearby node.
    """

    def __init__(self, data: WeierstrassData, basepoint: CurvePoint, grid: GridSpec | None = None):
        self.data = data
        self.curve = data.curve
        self.grid = grid or GridSpec()
        self.basepoint = basepoint
        g = self.grid
        n = self.curve.sheets
        self.u = np.linspace(-g.umax, g.umax, g.nu)
        self.theta = 2 * math.pi * (np.arange(g.ntheta) + 0.5) / g.ntheta
        self.z = np.exp(self.u[:, None] + 1j * self.theta[None, :])
        self.w = np.moveaxis(self.curve.sheet_values(self.z), 0, -1)  # (nu, nt, N)
        self.specials = special_points(self.curve, list(data.phi))
        self.nbr_u = self._neighbours(1, 0)
        self.nbr_t = self._neighbours(0, 1)
        self.f = np.full(self.w.shape + (3,), np.nan)
        self.tree_edges = 0
        self._accumulate()

    # -- connectivity
    def _shift(self, di, dj):
        nu, nt = self.z.shape
        ii = np.arange(nu - di)
        jj = (np.arange(nt) + dj) % nt
        return ii, jj

    def _neighbours(self, di, dj):
        """Sheet index reached at the ``(di, dj)`` neighbour from each node."""
        nu, nt, n = self.w.shape
        ii, jj = self._shift(di, dj)
        z0 = self.z[ii][:, :, None]
        z1 = self.z[ii + di][:, jj][:, :, None]
        w1 = _continue_chord(self.curve, z0, self.w[ii], z1)
        cand = self.w[ii + di][:, jj]  # (nu', nt, N)
        dist = np.abs(w1[..., :, None] - cand[..., None, :])
        return np.argmin(dist, axis=-1)

    def _edge_clear(self, z0, z1, factor=0.25):
        d = np.full(z0.shape, np.inf)
        seg = z1 - z0
        for p in self.specials:
            s = np.clip(((p - z0) * np.conj(seg)).real / np.abs(seg) ** 2, 0, 1)
            d = np.minimum(d, np.abs(z0 + s * seg - p))
        return d >= factor * np.abs(seg)

    def _accumulate(self):
        nu, nt, n = self.w.shape
        edges = {}
        for (di, dj), nbr in (((1, 0), self.nbr_u), ((0, 1), self.nbr_t)):
            ii, jj = self._shift(di, dj)
            I, J, S = np.meshgrid(ii, np.arange(nt), np.arange(n), indexing="ij")
            I2, J2 = I + di, jj[J]
            S2 = nbr[I, J, S]
            z0 = self.z[I, J]
            z1 = self.z[I2, J2]
            clear = self._edge_clear(z0, z1)
            vals, ok = chord_integrals(self.data, z0[clear], self.w[I, J, S][clear], z1[clear])
            a = np.stack([I[clear], J[clear], S[clear]], -1)[ok]
            b = np.stack([I2[clear], J2[clear], S2[clear]], -1)[ok]
            v = vals[:, ok].real.T
            for p, q, inc in zip(map(tuple, a), map(tuple, b), v):
                edges.setdefault(p, []).append((q, inc))
                edges.setdefault(q, []).append((p, -inc))
        root = self._root()
        bp = self.basepoint
        seg = path_to(self.curve, bp, CurvePoint(self.z[root[:2]], self.w[root]), list(self.data.phi))
        self.f[root] = integrate_over(list(self.data.phi), seg, self.curve).real
        queue = deque([root])
        seen = {root}
        while queue:
            p = queue.popleft()
            for q, inc in edges.get(p, ()):
                if q not in seen:
                    seen.add(q)
                    self.f[q] = self.f[p] + inc
                    self.tree_edges += 1
                    queue.append(q)

    def _root(self):
        bz = complex(self.basepoint.z)
        i = int(np.argmin(np.abs(self.u - math.log(abs(bz)))))
        j = int(np.argmin(np.abs(np.exp(1j * self.theta) - np.exp(1j * np.angle(bz)))))
        w1 = _continue_chord(self.curve, bz, complex(self.basepoint.w), self.z[i, j])
        s = int(np.argmin(np.abs(self.w[i, j] - w1)))
        return (i, j, s)

    # -- evaluation
    def evaluate(self, z, w) -> np.ndarray:
        """``f`` at curve points ``(z, w)``; shape ``z.shape + (3,)``."""
        z = np.asarray(z, dtype=complex)
        w = np.asarray(w, dtype=complex)
        shape = z.shape
        z, w = z.ravel(), w.ravel()
        out = np.full((z.size, 3), np.nan)
        pending = np.arange(z.size)
        du = self.u[1] - self.u[0]
        dt = self.theta[1] - self.theta[0]
        fi = (np.log(np.abs(z)) - self.u[0]) / du
        fj = (np.mod(np.angle(z), 2 * math.pi) - self.theta[0]) / dt
        for oi, oj in ((0, 0), (1, 0), (0, 1), (1, 1), (-1, 0), (0, -1), (2, 0), (0, 2)):
            if not pending.size:
                break
            i = np.clip(np.floor(fi[pending]).astype(int) + oi, 0, len(self.u) - 1)
            j = np.mod(np.floor(fj[pending]).astype(int) + oj, len(self.theta))
            z0 = self.z[i, j]
            z1 = z[pending]
            clear = self._edge_clear(z0, z1, 0.5) | (np.abs(z1 - z0) == 0)
            w_at = _continue_chord(self.curve, z0[:, None], self.w[i, j], z1[:, None])
            s = np.argmin(np.abs(w_at - w[pending][:, None]), axis=1)
            f0 = self.f[i, j, s]
            usable = clear & np.all(np.isfinite(f0), axis=1)
            if not usable.any():
                continue
            idx = np.flatnonzero(usable)
            vals, ok = chord_integrals(self.data, z0[idx], self.w[i[idx], j[idx], s[idx]], z1[idx])
            good = idx[ok]
            out[pending[good]] = f0[good] + vals[:, ok].real.T
            pending = np.delete(pending, good)
        return out.reshape(shape + (3,))


# --------------------------------------------------------------------------
# meshes


@dataclass
class SurfaceMesh:
    vertices: np.ndarray
    faces: np.ndarray
    gauss_map: np.ndarray
    conformal_factor: np.ndarray
    domain_tag: list = field(default_factory=list)

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float).reshape(-1, 3)
        self.faces = np.asarray(self.faces, dtype=np.int64).reshape(-1, 3)
        self.gauss_map = np.asarray(self.gauss_map, dtype=float).reshape(-1, 3)
        self.conformal_factor = np.asarray(self.conformal_factor, dtype=float).ravel()
        if self.faces.size and (self.faces.min() < 0 or self.faces.max() >= len(self.vertices)):
            raise ValueError("face index out of range")

    @property
    def edge_length(self) -> float:
        if not self.faces.size:
            return 0.0
        v = self.vertices
        e = np.concatenate([v[self.faces[:, 0]] - v[self.faces[:, 1]],
                            v[self.faces[:, 1]] - v[self.faces[:, 2]],
                            v[self.faces[:, 2]] - v[self.faces[:, 0]]])
        return float(np.median(np.linalg.norm(e, axis=1)))


def empty_mesh() -> SurfaceMesh:
    z = np.zeros((0, 3))
    return SurfaceMesh(z, np.zeros((0, 3), dtype=np.int64), z, np.zeros(0), [])


def build_mesh(data: WeierstrassData, basepoint: CurvePoint, grid: GridSpec | None = None,
               period_report=None, force: bool = False, field_: SurfaceField | None = None) -> SurfaceMesh:
    """Triangle mesh of ``f`` over the log-polar grid on all sheets.

    Grid cells whose corner loop does not close on the curve contain a
    branch point and are dropped; every other cell becomes two triangles.
    """
    if period_report is not None and not period_report.passed and not force:
        raise TornMeshError(
            f"period residual {period_report.max_cycle_residual:.3e} exceeds {period_report.tol:g}")
    if grid is not None and (grid.nu == 0 or grid.ntheta == 0):
        return empty_mesh()
    fld = field_ or SurfaceField(data, basepoint, grid)
    nu, nt, n = fld.w.shape
    index = np.arange(nu * nt * n).reshape(nu, nt, n)
    faces = []
    for i in range(nu - 1):
        for j in range(nt):
            j1 = (j + 1) % nt
            for s in range(n):
                s10 = fld.nbr_u[i, j, s]
                s11 = fld.nbr_t[i + 1, j, s10]
                s01 = fld.nbr_t[i, j, s]
                if fld.nbr_u[i, j1, s01] != s11:
                    continue
                a, b, c, d = index[i, j, s], index[i + 1, j, s10], index[i + 1, j1, s11], index[i, j1, s01]
                faces += [(a, b, c), (a, c, d)]
    verts = fld.f.reshape(-1, 3)
    faces = np.array(faces, dtype=np.int64).reshape(-1, 3)
    finite = np.all(np.isfinite(verts), axis=1)
    faces = faces[np.all(finite[faces], axis=1)]
    zz = np.broadcast_to(fld.z[:, :, None], fld.w.shape)
    gv = as_sum(data.g).evaluate(zz, fld.w)
    tags = [(complex(zz[i, j, s]), int(s)) for i in range(nu) for j in range(nt) for s in range(n)]
    return SurfaceMesh(verts, faces, gauss_map(gv).reshape(-1, 3),
                       conformal_factor(data, zz, fld.w).ravel(), tags)


def export_obj(mesh: SurfaceMesh, destination) -> None:
    lines = ["# msforge surface mesh"]
    lines += [f"v {x:.12g} {y:.12g} {z:.12g}" for x, y, z in mesh.vertices]
    lines += [f"vn {x:.12g} {y:.12g} {z:.12g}" for x, y, z in mesh.gauss_map]
    lines += [f"f {a + 1}//{a + 1} {b + 1}//{b + 1} {c + 1}//{c + 1}" for a, b, c in mesh.faces]
    Path(destination).write_text("\n".join(lines) + "\n")


def export_ply(mesh: SurfaceMesh, destination) -> None:
    """Binary little-endian PLY with vertex normals."""
    header = (
        "ply\nformat binary_little_endian 1.0\n"
        f"element vertex {len(mesh.vertices)}\n"
        "property double x\nproperty double y\nproperty double z\n"
        "property double nx\nproperty double ny\nproperty double nz\n"
        f"element face {len(mesh.faces)}\n"
        "property list uchar int vertex_indices\nend_header\n"
    ).encode()
    body = bytearray()
    for v, nrm in zip(mesh.vertices, mesh.gauss_map):
        body += struct.pack("<6d", *v, *nrm)
    for f in mesh.faces:
        body += struct.pack("<B3i", 3, *f)
    Path(destination).write_bytes(header + bytes(body))


def write_sidecar(destination, **meta) -> None:
    Path(destination).write_text(json.dumps(meta, indent=2, sort_keys=True, default=float) + "\n")


# --------------------------------------------------------------------------
# total curvature


@dataclass(frozen=True)
class TotalCurvature:
    levels: tuple
    values: tuple
    extrapolated: float
    expected: float

    @property
    def relative_error(self) -> float:
        return abs(self.extrapolated - self.expected) / self.expected


def curvature_integral(data: WeierstrassData, nu: int, ntheta: int, umax: float = 30.0) -> float:
    """Midpoint rule for ``int |K| dA = int 4 |g'|^2 / (1 + |g|^2)^2 dx dy`` over all sheets."""
    du = 2 * umax / nu
    dt = 2 * math.pi / ntheta
    u = -umax + du * (np.arange(nu) + 0.5)
    th = dt * (np.arange(ntheta) + 0.5)
    total = 0.0
    for row in np.array_split(np.arange(nu), max(1, nu // 64)):
        z = np.exp(u[row][:, None] + 1j * th[None, :])
        ws = data.curve.sheet_values(z)
        acc = 0.0
        for w in ws:
            gv = as_sum(data.g).evaluate(z, w)
            gp = g_prime(data.g, z, w, data.curve)
            acc = acc + 4 * np.abs(gp) ** 2 / (1 + np.abs(gv) ** 2) ** 2
        total += float(np.sum(acc * np.abs(z) ** 2))
    return total * du * dt


def total_curvature(data: WeierstrassData, levels=(256, 512, 1024), umax: float = 30.0) -> TotalCurvature:
    """``int |K| dA`` with Richardson extrapolation over grid doublings.

    The observed order is estimated from the last three levels; with only
    two levels first order is assumed.
    """
    vals = tuple(curvature_integral(data, n, n, umax) for n in levels)
    if len(vals) >= 3:
        d1, d2 = vals[-2] - vals[-3], vals[-1] - vals[-2]
        ratio = d1 / d2 if d2 else 2.0
        p = math.log2(ratio) if ratio > 1.05 else 1.0
        extra = vals[-1] + (vals[-1] - vals[-2]) / (2 ** p - 1)
    elif len(vals) == 2:
        extra = 2 * vals[1] - vals[0]
    else:
        extra = vals[0]
    expected = 4 * math.pi * degree(data.g, data.curve)
    return TotalCurvature(tuple(levels), vals, extra, expected)


# --------------------------------------------------------------------------
# ends


@dataclass(frozen=True)
class End:
    place: Place
    d: int
    kind: str
    normal: tuple
    flux: float


@dataclass(frozen=True)
class EndReport:
    ends: tuple

    @property
    def d(self) -> tuple:
        return tuple(e.d for e in self.ends)


def end_orders(data: WeierstrassData) -> EndReport:
    """Pole orders of ``Phi`` at each end: ``d = max_j(-ord Phi_j) - 1``."""
    curve = data.curve
    ends = []
    for p in curve.punctures:
        for pl in curve.places_over(p.z):
            pole = max(-local_order(phi, pl, curve) for phi in data.phi)
            if pole < 2:
                raise ValueError(f"Phi is regular at {pl}; not an end")
            d = pole - 1
            flux = complex(residue(data.phi.phi3, pl, curve))
            if d >= 2:
                kind = "higher"
            elif abs(flux) > 1e-12:
                kind = "embedded-catenoidal"
            else:
                kind = "embedded-planar"
            og = local_order(data.g, pl, curve)
            normal = (0.0, 0.0, -1.0) if og > 0 else (0.0, 0.0, 1.0) if og < 0 else (float("nan"),) * 3
            ends.append(End(pl, d, kind, normal, flux.real))
    return EndReport(tuple(ends))


@dataclass(frozen=True)
class JorgeMeeks:
    lhs: int
    rhs: int
    bound: int
    equality: bool
    embedded_equality: bool
    degree_bound_holds: bool


def jorge_meeks_check(gamma: int, ends, deg_g: int) -> JorgeMeeks:
    """``chi - sum(d_i + 1) = -2 deg g`` and ``<= 2 (1 - gamma - n)``, in integers."""
    d = list(ends.d if isinstance(ends, EndReport) else ends)
    chi = 2 - 2 * gamma
    n = len(d)
    lhs = chi - sum(x + 1 for x in d)
    rhs = -2 * deg_g
    bound = 2 * (1 - gamma - n)
    return JorgeMeeks(lhs, rhs, bound, lhs == rhs, (lhs == bound) == all(x == 1 for x in d),
                      deg_g >= gamma + n - 1 and lhs <= bound)


# --------------------------------------------------------------------------
# symmetries


def compose(a: SymmetryOp, b: SymmetryOp) -> SymmetryOp:
    """``a o b`` (apply ``b`` first)."""
    cj = np.conj if a.anti else (lambda x: x)
    alpha = a.alpha * cj(b.alpha) ** a.zpow
    beta = a.beta * cj(b.alpha) ** a.wz_pow * cj(b.beta) ** a.wpow
    zpow = a.zpow * b.zpow
    wz_pow = b.zpow * a.wz_pow + b.wz_pow * a.wpow
    wpow = a.wpow * b.wpow
    name = a.name if b.name == "id" else b.name if a.name == "id" else f"{a.name}*{b.name}"
    return SymmetryOp(name, a.matrix @ b.matrix, complex(alpha), zpow,
                      complex(beta), wz_pow, wpow, a.anti != b.anti)


def _key(op: SymmetryOp):
    return (op.anti, tuple(np.round(op.matrix.ravel(), 8) + 0.0))


def group_elements(generators, budget: int = 1000) -> list:
    """All elements generated by ``generators`` (closed under composition)."""
    elems = {_key(IDENTITY): IDENTITY}
    frontier = [IDENTITY]
    while frontier:
        nxt = []
        for e in frontier:
            for g in generators:
                h = compose(g, e)
                k = _key(h)
                if k not in elems:
                    elems[k] = h
                    nxt.append(h)
                    if len(elems) > budget:
                        raise RuntimeError("group does not close within the budget")
        frontier = nxt
    return list(elems.values())


def symmetry_group_order(generators, budget: int = 1000) -> int:
    return len(group_elements(generators, budget))


def sample_points(curve, n: int, seed: int = 0, rmin=math.exp(-1.5), rmax=math.exp(1.5), margin=0.05):
    """Random curve points in an annulus, kept ``margin`` away from special values."""
    rng = np.random.default_rng(seed)
    specials = special_points(curve)
    zs, ws = [], []
    while len(zs) < n:
        r = math.exp(rng.uniform(math.log(rmin), math.log(rmax)))
        z = r * np.exp(1j * rng.uniform(0, 2 * math.pi))
        if any(abs(z - p) < margin for p in specials):
            continue
        zs.append(z)
        ws.append(curve.sheet_values(z)[rng.integers(curve.sheets)])
    return np.array(zs), np.array(ws)


def pullback_deviation(data: WeierstrassData, op: SymmetryOp, z, w) -> float:
    """``max |kappa^* Phi - O Phi|`` (with conjugation for antiholomorphic maps)."""
    z2, w2 = op(z, w)
    phi2 = data.phi.evaluate(z2, w2) * op.dmap_z(np.conj(z) if op.anti else z)
    phi = data.phi.evaluate(z, w)
    if op.anti:
        phi2 = np.conj(phi2)
    target = op.matrix @ phi
    return float(np.max(np.abs(phi2 - target) / (1 + np.abs(target))))


def translation_for(fld: SurfaceField, op: SymmetryOp) -> np.ndarray:
    bp = fld.basepoint
    z2, w2 = op(complex(bp.z), complex(bp.w))
    return fld.evaluate(np.array([z2]), np.array([w2]))[0]


def symmetry_check(fld: SurfaceField, op: SymmetryOp, samples: int = 1000, seed: int = 0) -> dict:
    """Deviation ``max |f(kappa p) - (O f(p) + v)|`` over random samples.

    ``v`` is taken from the image of the basepoint.  Also reports the
    pointwise pullback deviation of ``Phi``.
    """
    if not op.preserves(fld.curve):
        raise ValueError(f"{op.name} does not map the curve to itself")
    z, w = sample_points(fld.curve, samples, seed)
    v = translation_for(fld, op)
    f = fld.evaluate(z, w)
    z2, w2 = op(z, w)
    f2 = fld.evaluate(z2, w2)
    dev = np.linalg.norm(f2 - (f @ op.matrix.T + v), axis=1)
    return {
        "op": op.name,
        "deviation": float(np.nanmax(dev)),
        "evaluated": int(np.sum(np.isfinite(dev))),
        "pullback": pullback_deviation(fld.data, op, z, w),
        "translation": v.tolist(),
    }


# --------------------------------------------------------------------------
# geodesic on the fixed set of kappa3 o kappa1 (even family)


def bjorling_geodesic_check(fld: SurfaceField, a: float, samples: int = 720) -> dict:
    """Trace ``f`` along ``|z| = sqrt(a)``, ``|w| = 1/c``.

    Over ``|z| = sqrt(a)`` every sheet has ``|w| = 1/c``, and the preimage is
    one closed curve turning ``N`` times around the origin.  The trace is
    integrated along that curve; ``x3_deviation`` measures planarity and
    ``closure_gap`` compares the trace with ``f`` obtained from the basepoint
    by independent paths, which agree only when the periods close.
    """
    data = fld.data
    curve = data.curve
    n = curve.sheets
    r = math.sqrt(a)
    total = samples * n
    th = 2 * math.pi * n * np.arange(total + 1) / total
    z = r * np.exp(1j * th)
    z_start = z[0]
    w_start = curve.sheet_values(z_start)[0]
    w = np.empty(total + 1, dtype=complex)
    w[0] = w_start
    for k in range(total):
        w[k + 1] = _continue_chord(curve, z[k], w[k], z[k + 1])
    inc, ok = chord_integrals(data, z[:-1], w[:-1], z[1:])
    if not ok.all():
        raise RuntimeError("chord integration failed along the fixed curve")
    f0 = fld.evaluate(z[:1], w[:1])[0]
    trace = f0 + np.vstack([np.zeros(3), np.cumsum(inc.real.T, axis=0)])
    ref = fld.evaluate(z, w)
    gap = np.linalg.norm(trace - ref, axis=1)
    c = float(np.mean(np.abs(w)))
    return {
        "x3_deviation": float(np.max(np.abs(trace[:, 2] - np.mean(trace[:, 2])))),
        "closure_gap": float(np.nanmax(gap)),
        "end_to_start": float(np.linalg.norm(trace[-1] - trace[0])),
        "abs_w": c,
        "w_end_matches": bool(abs(w[-1] - w[0]) < 1e-9 * (1 + abs(w[0]))),
    }
