"""Path integration of Weierstrass forms on superelliptic curves.

``w`` is continued along a ``z``-trajectory by tracking the argument of every
factor ``z - r_j`` continuously, so that
``w(t) = w(0) * exp(sum_j e_j (log(z(t) - r_j) - log(z(0) - r_j)) / N)``
with each logarithm continued along the path.  This is the analytic
continuation itself; sampling is refined until no factor turns by more than
a fraction of a radian between samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .curve import (
    INF,
    CurvePoint,
    ExprSum,
    Monomial,
    Place,
    SuperellipticCurve,
    as_sum,
    same_root,
)

GL_ORDER = 16
_GL_X, _GL_W = np.polynomial.legendre.leggauss(GL_ORDER)
MAX_ANGLE_STEP = 0.35
DEFAULT_TOL = 1e-12


class ContinuationError(RuntimeError):
    pass


class PoleOnPathError(ValueError):
    pass


# --------------------------------------------------------------------------
# trajectories


@dataclass(frozen=True)
class Line:
    z0: complex
    z1: complex

    def z(self, t):
        return self.z0 + (self.z1 - self.z0) * np.asarray(t, dtype=float)

    def dz(self, t):
        return np.full(np.shape(t), self.z1 - self.z0, dtype=complex)

    @property
    def start(self):
        return complex(self.z0)

    @property
    def end(self):
        return complex(self.z1)

    def distance_to(self, p: complex) -> float:
        d = self.z1 - self.z0
        if d == 0:
            return abs(p - self.z0)
        s = min(1.0, max(0.0, ((p - self.z0) * np.conj(d)).real / abs(d) ** 2))
        return abs(self.z0 + s * d - p)

    def mapped(self, fz):
        return Line(fz(self.z0), fz(self.z1))


@dataclass(frozen=True)
class Arc:
    """``center + radius * exp(i (theta0 + sweep * t))``."""

    center: complex
    radius: float
    theta0: float
    sweep: float

    def z(self, t):
        return self.center + self.radius * np.exp(1j * (self.theta0 + self.sweep * np.asarray(t, dtype=float)))

    def dz(self, t):
        return 1j * self.sweep * (self.z(t) - self.center)

    @property
    def start(self):
        return complex(self.z(0.0))

    @property
    def end(self):
        return complex(self.z(1.0))

    def distance_to(self, p: complex) -> float:
        if abs(self.sweep) >= 2 * math.pi:
            return abs(abs(p - self.center) - self.radius)
        t = np.linspace(0.0, 1.0, 513)
        return float(np.min(np.abs(self.z(t) - p)))


@dataclass(frozen=True)
class Mapped:
    """Image of a trajectory under a holomorphic or antiholomorphic ``z``-map."""

    base: object
    fz: object
    dfz: object
    anti: bool = False

    def z(self, t):
        z = self.base.z(t)
        return self.fz(np.conj(z) if self.anti else z)

    def dz(self, t):
        z = self.base.z(t)
        dz = self.base.dz(t)
        if self.anti:
            return self.dfz(np.conj(z)) * np.conj(dz)
        return self.dfz(z) * dz

    @property
    def start(self):
        return complex(self.z(np.array(0.0)))

    @property
    def end(self):
        return complex(self.z(np.array(1.0)))

    def distance_to(self, p: complex) -> float:
        t = np.linspace(0.0, 1.0, 1025)
        return float(np.min(np.abs(self.z(t) - p)))


@dataclass(frozen=True)
class PathSegment:
    """A chain of trajectories with the branch of ``w`` at its start."""

    pieces: tuple
    start_w: complex

    @property
    def start(self) -> complex:
        return self.pieces[0].start

    @property
    def end(self) -> complex:
        return self.pieces[-1].end

    def then(self, *pieces) -> "PathSegment":
        return PathSegment(self.pieces + tuple(pieces), self.start_w)


@dataclass(frozen=True)
class Cycle(PathSegment):
    """Closed chain; closure on the curve is checked on demand."""

    label: str = ""


def path(start_w, *pieces) -> PathSegment:
    return PathSegment(tuple(pieces), complex(start_w))


def cycle(start_w, *pieces, label: str = "") -> Cycle:
    return Cycle(tuple(pieces), complex(start_w), label)


# --------------------------------------------------------------------------
# continuation


def special_points(curve: SuperellipticCurve, exprs: Sequence = ()) -> list:
    pts = [complex(r) for r, _ in curve.factors]
    pts += [complex(p.z) for p in curve.punctures if p.z != INF]
    for e in exprs:
        for t in as_sum(e).terms:
            pts += [complex(r) for r, _ in t.z_factors]
    out: list = []
    for p in pts:
        if not any(abs(p - q) < 1e-12 for q in out):
            out.append(p)
    return out


def default_clearance(curve: SuperellipticCurve, exprs: Sequence = ()) -> float:
    pts = special_points(curve, exprs)
    if len(pts) < 2:
        return 1e-3
    d = min(abs(p - q) for i, p in enumerate(pts) for q in pts[i + 1:])
    return 1e-3 * d


def _check_clearance(piece, pts, clearance):
    for p in pts:
        if piece.distance_to(p) < clearance:
            raise PoleOnPathError(f"trajectory passes within {clearance:g} of special point {p}")


def _track(piece, curve: SuperellipticCurve, w0: complex, t: np.ndarray):
    """``(z, w)`` at sorted parameters ``t`` with ``t[0] == 0``."""
    z = piece.z(t)
    if not curve.factors:
        return z, np.full(z.shape, w0, dtype=complex)
    roots = np.array([complex(r) for r, _ in curve.factors])
    exps = np.array([e for _, e in curve.factors], dtype=float)
    d = z[None, :] - roots[:, None]
    ang = np.unwrap(np.angle(d), axis=1)
    if ang.shape[1] > 1 and np.max(np.abs(np.diff(ang, axis=1))) > MAX_ANGLE_STEP:
        raise ContinuationError("step too large for unambiguous branch tracking")
    logmod = np.log(np.abs(d))
    incr = (logmod - logmod[:, :1]) + 1j * (ang - ang[:, :1])
    w = w0 * np.exp((exps[:, None] * incr).sum(axis=0) / curve.sheets)
    return z, w


def _track_adaptive(piece, curve, w0, n=64, max_n=2**20):
    while n <= max_n:
        t = np.linspace(0.0, 1.0, n + 1)
        try:
            return t, *_track(piece, curve, w0, t)
        except ContinuationError:
            n *= 4
    raise ContinuationError("branch tracking did not resolve the trajectory")


def continue_w(segment: PathSegment, curve: SuperellipticCurve, clearance: float | None = None) -> complex:
    """End value of ``w`` continued along ``segment``."""
    pts = special_points(curve)
    clearance = default_clearance(curve) if clearance is None else clearance
    w = segment.start_w
    if not curve.on_curve(CurvePoint(segment.start, w), tol=1e-8):
        raise ContinuationError("start_w does not lie on the curve")
    for piece in segment.pieces:
        _check_clearance(piece, pts, clearance)
        _, _, ws = _track_adaptive(piece, curve, w)
        w = complex(ws[-1])
    return w


def snap_to_sheet(curve: SuperellipticCurve, z: complex, w: complex) -> complex:
    vals = curve.sheet_values(complex(z))
    return complex(vals[np.argmin(np.abs(vals - w))])


def is_closed(c: PathSegment, curve: SuperellipticCurve, tol: float = 1e-8) -> bool:
    if abs(c.end - c.start) > tol * (1 + abs(c.start)):
        return False
    w1 = continue_w(c, curve)
    return abs(w1 - c.start_w) <= tol * (1 + abs(c.start_w))


# --------------------------------------------------------------------------
# integration


def _piece_integral(exprs, piece, curve, w0, panels):
    edges = np.linspace(0.0, 1.0, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * _GL_X[None, :]).ravel()
    weights = (half[:, None] * _GL_W[None, :]).ravel()
    t = np.concatenate(([0.0], nodes, [1.0]))
    z, w = _track(piece, curve, w0, t)
    zn, wn = z[1:-1], w[1:-1]
    dz = piece.dz(nodes)
    vals = np.array([as_sum(e).evaluate(zn, wn) for e in exprs])
    return (vals * dz[None, :]) @ weights, complex(w[-1])


def integrate_piece(exprs, piece, curve, w0, tol=DEFAULT_TOL, max_panels=2**14):
    panels = 4
    prev = None
    while panels <= max_panels:
        try:
            val, w1 = _piece_integral(exprs, piece, curve, w0, panels)
        except ContinuationError:
            panels *= 2
            continue
        if prev is not None:
            scale = 1.0 + np.max(np.abs(val))
            if np.max(np.abs(val - prev)) <= tol * scale:
                return val, w1
        prev = val
        panels *= 2
    raise ContinuationError("path integral did not converge")


def integrate_over(expr, segment: PathSegment, curve: SuperellipticCurve,
                   tol: float = DEFAULT_TOL, clearance: float | None = None):
    """``int expr`` along a path on the curve.

    ``expr`` may be a single differential or a sequence of them; the result
    is a complex number or an array accordingly.
    """
    single = isinstance(expr, (Monomial, ExprSum))
    exprs = [expr] if single else list(expr)
    for e in exprs:
        if not as_sum(e).differential:
            raise ValueError("only differentials can be integrated")
    pts = special_points(curve, exprs)
    clearance = default_clearance(curve, exprs) if clearance is None else clearance
    w = segment.start_w
    total = np.zeros(len(exprs), dtype=complex)
    for piece in segment.pieces:
        _check_clearance(piece, pts, clearance)
        val, w = integrate_piece(exprs, piece, curve, w, tol)
        total += val
    return complex(total[0]) if single else total


# --------------------------------------------------------------------------
# Weierstrass data


@dataclass(frozen=True)
class PhiTriple:
    phi1: ExprSum
    phi2: ExprSum
    phi3: ExprSum

    def __iter__(self):
        return iter((self.phi1, self.phi2, self.phi3))

    def evaluate(self, z, w) -> np.ndarray:
        return np.array([p.evaluate(z, w) for p in self])


@dataclass(frozen=True)
class WeierstrassData:
    g: ExprSum
    eta: ExprSum
    curve: SuperellipticCurve
    name: str = ""
    params: dict = field(default_factory=dict, compare=False)

    @property
    def phi(self) -> PhiTriple:
        return phi_from_data(self.g, self.eta)


def phi_from_data(g, eta) -> PhiTriple:
    """``((1 - g^2) eta, i (1 + g^2) eta, 2 g eta)``."""
    g = as_sum(g)
    eta = as_sum(eta)
    g2eta = g * g * eta
    return PhiTriple(eta - g2eta, 1j * (eta + g2eta), 2.0 * (g * eta))


def evaluate_f(segment: PathSegment, data: WeierstrassData, tol: float = DEFAULT_TOL) -> np.ndarray:
    """``Re int Phi`` from the start of ``segment`` to its end."""
    if not segment.pieces:
        return np.zeros(3)
    return integrate_over(list(data.phi), segment, data.curve, tol).real


def residue_radius(curve: SuperellipticCurve, z0, exprs=()) -> float:
    pts = special_points(curve, exprs)
    if z0 == INF:
        return 4.0 * max([abs(p) for p in pts] + [1.0])
    others = [abs(p - complex(z0)) for p in pts if abs(p - complex(z0)) > 1e-12]
    return 0.25 * min(others) if others else 1.0


def place_loop(curve: SuperellipticCurve, place: Place, radius: float) -> Cycle:
    """Positively oriented loop around ``place`` in its local coordinate.

    The circle is traversed ``e_P`` times so that it closes on the curve.
    """
    n = curve.sheets
    e = curve.exponent_at(place.z)
    g = math.gcd(n, e)
    ep = n // g
    zeta = np.exp(2j * np.pi * place.index / n)
    if place.z == INF:
        s = radius ** (-1.0 / ep)
        unit = np.prod([(1 - complex(r) / radius) ** ee for r, ee in curve.factors]) if curve.factors else 1.0
        h = np.exp(sum(ee * np.log(1 - complex(r) / radius) for r, ee in curve.factors) / n) if curve.factors else 1.0
        del unit
        w0 = zeta * s ** (curve.infinity_exponent // g) * h
        arc = Arc(0.0, radius, 0.0, -2 * math.pi * ep)
        return cycle(w0, arc, label=f"loop@inf#{place.index}")
    z0 = complex(place.z)
    s = radius ** (1.0 / ep)
    h = np.exp(sum(ee * np.log(z0 + radius - complex(r)) for r, ee in curve.factors if not same_root(r, place.z)) / n) if curve.factors else 1.0
    w0 = zeta * s ** (e // g) * h
    arc = Arc(z0, radius, 0.0, 2 * math.pi * ep)
    return cycle(w0, arc, label=f"loop@{place.z}#{place.index}")


def residue_at(expr, place, curve: SuperellipticCurve, radius: float | None = None) -> complex:
    """Residue by numerical integration over a small loop around the place."""
    if not isinstance(place, Place):
        place = Place(place)
    radius = residue_radius(curve, place.z, [expr]) if radius is None else radius
    loop = place_loop(curve, place, radius)
    return integrate_over(expr, loop, curve, clearance=0.5 * radius) / (2j * math.pi)


# --------------------------------------------------------------------------
# period verification


@dataclass
class PeriodReport:
    cycles: list
    residues: list
    tol: float

    @property
    def max_cycle_residual(self) -> float:
        return max([max(c["period1"], c["period2"]) for c in self.cycles] + [0.0])

    @property
    def max_residue_imag(self) -> float:
        return max([r["max_imag"] for r in self.residues] + [0.0])

    @property
    def passed(self) -> bool:
        return self.max_cycle_residual < self.tol and self.max_residue_imag < self.tol

    def to_json(self) -> dict:
        return {
            "cycles": self.cycles,
            "residues": self.residues,
            "max_cycle_residual": self.max_cycle_residual,
            "max_residue_imag": self.max_residue_imag,
            "tol": self.tol,
            "passed": self.passed,
        }


def cycle_residuals(data: WeierstrassData, c: PathSegment, tol=DEFAULT_TOL):
    g, eta = data.g, data.eta
    i_eta, i_g2eta, i_geta = integrate_over([eta, g * g * eta, g * eta], c, data.curve, tol)
    return abs(i_eta - np.conj(i_g2eta)), abs(i_geta.real), (i_eta, i_g2eta, i_geta)


def verify_periods(data: WeierstrassData, generators: Sequence[PathSegment], tol: float = 1e-8) -> PeriodReport:
    curve = data.curve
    cycles = []
    for c in generators:
        if not is_closed(c, curve):
            raise ContinuationError(f"generator {getattr(c, 'label', '')!r} is not closed on the curve")
        r1, r2, _ = cycle_residuals(data, c)
        cycles.append({"label": getattr(c, "label", ""), "period1": float(r1), "period2": float(r2)})
    residues = []
    for p in curve.punctures:
        for pl in curve.places_over(p.z):
            res = [residue_at(ph, pl, curve) for ph in data.phi]
            residues.append({
                "place": [str(pl.z), pl.index],
                "residue": [[r.real, r.imag] for r in res],
                "max_imag": float(max(abs(r.imag) for r in res)),
            })
    return PeriodReport(cycles, residues, tol)


def stadium(a: float, b: float, rho: float) -> tuple:
    """Counter-clockwise loop around the real segment ``[a, b]``, starting below its midpoint."""
    m = 0.5 * (a + b)
    return (
        Line(m - 1j * rho, b - 1j * rho),
        Arc(b, rho, -0.5 * math.pi, math.pi),
        Line(b + 1j * rho, a + 1j * rho),
        Arc(a, rho, 0.5 * math.pi, math.pi),
        Line(a - 1j * rho, m - 1j * rho),
    )


# --------------------------------------------------------------------------
# navigation


def _safe_radius(pts) -> float:
    if len(pts) < 2:
        return 0.1
    return 0.1 * min(abs(p - q) for i, p in enumerate(pts) for q in pts[i + 1:])


def _route(z0: complex, z1: complex, pts, safe: float) -> list:
    """Polyline from ``z0`` to ``z1`` keeping ``safe`` away from ``pts``."""
    def clear(a, b):
        return all(Line(a, b).distance_to(p) >= safe for p in pts)

    if clear(z0, z1):
        return [Line(z0, z1)]
    d = z1 - z0
    for scale in (0.1, 0.2, 0.35, 0.5, 0.75, 1.0, 1.5, 2.5, 4.0):
        for sign in (1, -1):
            mid = 0.5 * (z0 + z1) + sign * scale * 1j * (d if abs(d) > 0 else 1.0)
            if clear(z0, mid) and clear(mid, z1):
                return [Line(z0, mid), Line(mid, z1)]
    raise PoleOnPathError(f"no clear route from {z0} to {z1}")


def _sheet_loop(curve, z: complex, j: int, pts, safe: float) -> list:
    """Pieces returning to ``z`` that multiply ``w`` by ``exp(2 pi i j / N)``."""
    n = curve.sheets
    j %= n
    if j == 0:
        return []
    cands = sorted(
        (abs(complex(r) - z), complex(r), e)
        for r, e in curve.factors
        if math.gcd(e % n, n) == 1
    )
    for _, b, e in cands:
        m = (j * pow(e % n, -1, n)) % n
        others = [p for p in pts if abs(p - b) > 1e-12]
        rho = 0.5 * min([abs(p - b) for p in others] + [abs(z - b)])
        theta = np.angle(z - b)
        touch = b + rho * np.exp(1j * theta)
        try:
            legs = _route(z, touch, others, min(safe, 0.5 * rho))
        except PoleOnPathError:
            continue
        back = [Line(p.end, p.start) for p in reversed(legs)]
        return legs + [Arc(b, rho, theta, 2 * math.pi * m)] + back
    raise PoleOnPathError("no branch point available for a sheet change")


def path_to(curve: SuperellipticCurve, base: CurvePoint, target: CurvePoint,
            exprs: Sequence = ()) -> PathSegment:
    """A path on the curve from ``base`` to ``target`` (both finite, off the special set)."""
    pts = special_points(curve, exprs)
    safe = _safe_radius(pts)
    z0, z1 = complex(base.z), complex(target.z)
    pieces = _route(z0, z1, pts, safe) if abs(z1 - z0) > 0 else []
    w_end = continue_w(PathSegment(tuple(pieces), complex(base.w)), curve) if pieces else complex(base.w)
    ratio = complex(target.w) / w_end
    j = int(round(np.angle(ratio) / (2 * math.pi / curve.sheets))) % curve.sheets
    if abs(ratio - np.exp(2j * math.pi * j / curve.sheets)) > 1e-6:
        raise ContinuationError("target w is not a sheet value over target z")
    pieces += _sheet_loop(curve, z1, j, pts, safe)
    if not pieces:
        pieces = [Line(z0, z0)]
    return PathSegment(tuple(pieces), complex(base.w))


def f_at(target: CurvePoint, basepoint: CurvePoint, data: WeierstrassData,
         tol: float = DEFAULT_TOL) -> np.ndarray:
    """``f(target)`` relative to ``f(basepoint) = 0`` along a navigated path."""
    seg = path_to(data.curve, basepoint, target, list(data.phi))
    return evaluate_f(seg, data, tol)
