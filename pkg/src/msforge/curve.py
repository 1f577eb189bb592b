"""Superelliptic Riemann surfaces ``w^N = prod (z - r_i)^e_i`` and monomial
expressions on them.

Points of the compact curve lying over a finite ``z`` (or over ``z = inf``)
are called places.  Over a value ``z0`` with exponent ``e`` there are
``gcd(N, e)`` places, each with ramification ``N / gcd(N, e)``.  Orders and
Laurent series are taken in the local coordinate ``s`` with
``z - z0 = s**e_P`` (or ``1/z = s**e_P`` at infinity).
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Number
from typing import Iterable, Sequence

import numpy as np

INF = "inf"
ROOT_TOL = 1e-12
ON_CURVE_TOL = 1e-10


class MalformedCurveError(ValueError):
    pass


class ExpansionError(ValueError):
    pass


def _as_root(r):
    if isinstance(r, str):
        if r != INF:
            raise MalformedCurveError(f"unknown root token {r!r}")
        return INF
    if isinstance(r, (int, Fraction)):
        return r
    c = complex(r)
    if c.imag == 0.0:
        # keep exact where the float is an integer
        return int(c.real) if c.real.is_integer() else c.real
    return c


def same_root(a, b, tol: float = ROOT_TOL) -> bool:
    if a == INF or b == INF:
        return a == b
    return abs(complex(a) - complex(b)) <= tol * (1.0 + abs(complex(a)))


# --------------------------------------------------------------------------
# expressions


@dataclass(frozen=True)
class Monomial:
    """``coeff * prod (z - r)^n * w^p`` optionally times ``dz``."""

    coeff: complex = 1.0
    z_factors: tuple = ()
    w_power: int = 0
    differential: bool = False

    def __post_init__(self):
        merged: list[list] = []
        for r, n in self.z_factors:
            r = _as_root(r)
            if r == INF:
                raise ValueError("monomial factors must have finite roots")
            for item in merged:
                if same_root(item[0], r):
                    item[1] += int(n)
                    break
            else:
                merged.append([r, int(n)])
        object.__setattr__(
            self, "z_factors", tuple((r, n) for r, n in merged if n != 0)
        )
        object.__setattr__(self, "coeff", complex(self.coeff))
        object.__setattr__(self, "w_power", int(self.w_power))

    def __mul__(self, other):
        if isinstance(other, Number):
            return Monomial(self.coeff * other, self.z_factors, self.w_power, self.differential)
        if isinstance(other, ExprSum):
            return ExprSum((self,)) * other
        if self.differential and other.differential:
            raise ValueError("product of two differentials")
        return Monomial(
            self.coeff * other.coeff,
            self.z_factors + other.z_factors,
            self.w_power + other.w_power,
            self.differential or other.differential,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Number):
            return self * (1.0 / other)
        if other.differential:
            raise ValueError("division by a differential")
        return self * other.inverse()

    def inverse(self) -> "Monomial":
        if self.differential:
            raise ValueError("cannot invert a differential")
        return Monomial(
            1.0 / self.coeff,
            tuple((r, -n) for r, n in self.z_factors),
            -self.w_power,
        )

    def __pow__(self, k: int):
        if self.differential and k != 1:
            raise ValueError("power of a differential")
        return Monomial(
            self.coeff**k,
            tuple((r, n * k) for r, n in self.z_factors),
            self.w_power * k,
            self.differential,
        )

    def __add__(self, other):
        return ExprSum((self,)) + other

    __radd__ = __add__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return ExprSum((self,)) + (-other)

    def with_dz(self) -> "Monomial":
        return Monomial(self.coeff, self.z_factors, self.w_power, True)

    def evaluate(self, z, w):
        """Value (coefficient of ``dz`` for differentials) at numeric points."""
        z = np.asarray(z, dtype=complex)
        w = np.asarray(w, dtype=complex)
        out = np.full(np.broadcast(z, w).shape, self.coeff, dtype=complex)
        for r, n in self.z_factors:
            out = out * (z - complex(r)) ** n
        if self.w_power:
            out = out * w**self.w_power
        return out

    def log_derivative(self, z, curve: "SuperellipticCurve"):
        """``d/dz log(m)`` for a function monomial."""
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for r, n in self.z_factors:
            out = out + n / (z - complex(r))
        if self.w_power:
            out = out + self.w_power * curve.log_derivative_w(z)
        return out


@dataclass(frozen=True)
class ExprSum:
    """Finite linear combination of monomials."""

    terms: tuple = ()

    def __post_init__(self):
        terms = tuple(t for t in self.terms if t.coeff != 0)
        kinds = {t.differential for t in terms}
        if len(kinds) > 1:
            raise ValueError("cannot mix functions and differentials in a sum")
        object.__setattr__(self, "terms", terms)

    @property
    def differential(self) -> bool:
        return bool(self.terms) and self.terms[0].differential

    def __add__(self, other):
        if isinstance(other, Number):
            other = Monomial(other)
        if isinstance(other, Monomial):
            other = ExprSum((other,))
        return ExprSum(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self):
        return ExprSum(tuple(-t for t in self.terms))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (Number, Monomial)):
            other = ExprSum((other if isinstance(other, Monomial) else Monomial(other),))
        return ExprSum(tuple(a * b for a in self.terms for b in other.terms))

    __rmul__ = __mul__

    def evaluate(self, z, w):
        z = np.asarray(z, dtype=complex)
        w = np.asarray(w, dtype=complex)
        out = np.zeros(np.broadcast(z, w).shape, dtype=complex)
        for t in self.terms:
            out = out + t.evaluate(z, w)
        return out


def as_sum(expr) -> ExprSum:
    if isinstance(expr, ExprSum):
        return expr
    if isinstance(expr, Monomial):
        return ExprSum((expr,))
    if isinstance(expr, Number):
        return ExprSum((Monomial(expr),))
    raise TypeError(f"not an expression: {expr!r}")


def Z(root=0, power: int = 1) -> Monomial:
    """``(z - root)^power``."""
    return Monomial(1.0, ((root, power),))


def W(power: int = 1) -> Monomial:
    return Monomial(1.0, (), power)


DZ = Monomial(1.0, (), 0, True)


# --------------------------------------------------------------------------
# curve


@dataclass(frozen=True)
class CurvePoint:
    z: object
    w: object
    is_puncture: bool = False


@dataclass(frozen=True)
class Place:
    """A point of the compact curve: ``z`` value (or ``INF``) and branch index."""

    z: object
    index: int = 0


@dataclass(frozen=True)
class LaurentSeries:
    order: int  # power of s of the first stored coefficient
    coeffs: np.ndarray = field(compare=False)
    ramification: int = 1

    def coefficient(self, power: int) -> complex:
        k = power - self.order
        if k < 0:
            return 0.0j
        if k >= len(self.coeffs):
            raise ExpansionError("series truncated before requested power")
        return complex(self.coeffs[k])


@dataclass(frozen=True)
class SuperellipticCurve:
    """Compact Riemann surface ``w^sheets = prod (z - root)^exp``."""

    sheets: int
    factors: tuple
    punctures: tuple = ()

    def __post_init__(self):
        n = int(self.sheets)
        if n < 1:
            raise MalformedCurveError("sheets must be positive")
        facs: list = []
        for r, e in self.factors:
            r = _as_root(r)
            if r == INF:
                raise MalformedCurveError("infinity is implied by exponent bookkeeping")
            if int(e) == 0:
                raise MalformedCurveError("zero exponent")
            if any(same_root(r, q) for q, _ in facs):
                raise MalformedCurveError(f"repeated root {r}")
            facs.append((r, int(e)))
        object.__setattr__(self, "sheets", n)
        object.__setattr__(self, "factors", tuple(facs))
        object.__setattr__(
            self,
            "punctures",
            tuple(p if isinstance(p, Place) else Place(_as_root(p)) for p in self.punctures),
        )
        if n > 1 and math.gcd(n, *[e for _, e in facs]) != 1:
            raise MalformedCurveError("reducible curve: exponents share a factor with sheets")
        g2 = 2 - 2 * n + sum(n - math.gcd(n, e) for e in self.exponent_map().values())
        if g2 % 2 or g2 < 0:
            raise MalformedCurveError(f"non-integral or negative genus ({g2}/2)")

    # -- bookkeeping
    @property
    def infinity_exponent(self) -> int:
        return -sum(e for _, e in self.factors)

    def exponent_map(self) -> dict:
        out = {r: e for r, e in self.factors}
        out[INF] = self.infinity_exponent
        return out

    def exponent_at(self, z) -> int:
        z = _as_root(z)
        if z == INF:
            return self.infinity_exponent
        for r, e in self.factors:
            if same_root(r, z):
                return e
        return 0

    def places_over(self, z) -> list:
        return [Place(_as_root(z), i) for i in range(math.gcd(self.sheets, self.exponent_at(z)))]

    def ramification(self, z) -> int:
        return self.sheets // math.gcd(self.sheets, self.exponent_at(z))

    def branch_values(self) -> list:
        return [r for r, e in self.exponent_map().items() if e % self.sheets]

    def special_values(self) -> list:
        """Finite roots and branch points (the clearance set for paths)."""
        return [complex(r) for r, _ in self.factors]

    def is_puncture(self, z) -> bool:
        return any(same_root(p.z, _as_root(z)) for p in self.punctures)

    # -- numerics
    def rhs(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.ones_like(z)
        for r, e in self.factors:
            out = out * (z - complex(r)) ** e
        return out

    def log_derivative_w(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for r, e in self.factors:
            out = out + e / (z - complex(r))
        return out / self.sheets

    def log_rhs_phases(self, z) -> np.ndarray:
        """Principal ``arg(z - r)`` for each factor; shape ``(len(factors),) + z.shape``."""
        z = np.asarray(z, dtype=complex)
        return np.stack([np.angle(z - complex(r)) for r, _ in self.factors]) if self.factors else np.zeros((0,) + z.shape)

    def principal_w(self, z):
        """Branch ``exp((1/N) sum e_j Log(z - r_j))`` (principal logs per factor)."""
        z = np.asarray(z, dtype=complex)
        acc = np.zeros_like(z)
        for r, e in self.factors:
            acc = acc + e * np.log(z - complex(r))
        return np.exp(acc / self.sheets)

    def sheet_values(self, z) -> np.ndarray:
        """All ``N`` values of ``w`` over ``z`` (principal branch times roots of unity)."""
        base = self.principal_w(z)
        om = np.exp(2j * np.pi * np.arange(self.sheets) / self.sheets)
        return np.multiply.outer(om, base)

    def sheet_index(self, z, w) -> int:
        vals = self.sheet_values(complex(z))
        return int(np.argmin(np.abs(vals - w)))

    def on_curve(self, point: CurvePoint, tol: float = ON_CURVE_TOL) -> bool:
        if isinstance(point.z, str) or isinstance(point.w, str):
            return True
        lhs = complex(point.w) ** self.sheets
        return abs(lhs - complex(self.rhs(point.z))) <= tol * (1.0 + abs(point.w) ** self.sheets)

    # -- serialization
    def to_json(self) -> dict:
        def enc(r):
            return INF if r == INF else [complex(r).real, complex(r).imag]

        return {
            "sheets": self.sheets,
            "factors": [{"root": enc(r), "exp": e} for r, e in self.factors],
            "punctures": [{"root": enc(p.z), "index": p.index} for p in self.punctures],
        }

    @classmethod
    def from_json(cls, data) -> "SuperellipticCurve":
        if isinstance(data, str):
            data = json.loads(data)

        def dec(r):
            if r == INF:
                return INF
            re, im = r
            return complex(re, im) if im else re

        try:
            return cls(
                int(data["sheets"]),
                tuple((dec(f["root"]), int(f["exp"])) for f in data["factors"]),
                tuple(Place(dec(p["root"]), int(p.get("index", 0))) for p in data.get("punctures", [])),
            )
        except (KeyError, TypeError) as exc:
            raise MalformedCurveError(f"bad curve JSON: {exc}") from exc


def genus(curve: SuperellipticCurve) -> int:
    """Genus of the smooth compactification by Riemann-Hurwitz."""
    n = curve.sheets
    total = sum(n - math.gcd(n, e) for e in curve.exponent_map().values())
    g2 = 2 - 2 * n + total
    if g2 % 2 or g2 < 0:
        raise MalformedCurveError("non-integral genus")
    return g2 // 2


def euler_characteristic(curve: SuperellipticCurve) -> int:
    return 2 - 2 * genus(curve)


# --------------------------------------------------------------------------
# local orders and series


def _place_z(point):
    if isinstance(point, Place):
        return point.z, point.index
    if isinstance(point, CurvePoint):
        return _as_root(point.z), 0
    return _as_root(point), 0


def _monomial_order(m: Monomial, z0, curve: SuperellipticCurve) -> int:
    n = curve.sheets
    e = curve.exponent_at(z0)
    ep = n // math.gcd(n, e)
    w_ord = m.w_power * ep * e // n
    if z0 == INF:
        z_ord = -ep * sum(k for _, k in m.z_factors)
        d_ord = -ep - 1
    else:
        z_ord = ep * sum(k for r, k in m.z_factors if same_root(r, z0))
        d_ord = ep - 1
    return z_ord + w_ord + (d_ord if m.differential else 0)


def _log1p_series(b: complex, m: int) -> np.ndarray:
    """Coefficients of ``log(1 + u/b)`` in powers of ``u`` up to ``u^(m-1)``."""
    out = np.zeros(m, dtype=complex)
    k = np.arange(1, m)
    out[1:] = -((-1.0 / b) ** k) / k
    return out


def _exp_series(g: np.ndarray) -> np.ndarray:
    m = len(g)
    f = np.zeros(m, dtype=complex)
    f[0] = cmath.exp(g[0])
    for j in range(1, m):
        k = np.arange(1, j + 1)
        f[j] = np.dot(k * g[1 : j + 1], f[j - k]) / j
    return f


def _monomial_series(m: Monomial, z0, index: int, curve: SuperellipticCurve, nu: int):
    """Series of a monomial as ``s^order * sum_k a_k u^k`` with ``u = s^e_P``."""
    n = curve.sheets
    e = curve.exponent_at(z0)
    g = math.gcd(n, e)
    ep = n // g
    order = _monomial_order(m, z0, curve)
    zeta = cmath.exp(2j * math.pi * index / n) ** m.w_power
    logs = np.zeros(nu, dtype=complex)
    const = m.coeff * zeta
    if z0 == INF:
        logs = _dedupe_inf(m, curve, nu)
        if m.differential:
            const *= -ep
    else:
        roots = {}
        for r, k in m.z_factors:
            if not same_root(r, z0):
                roots.setdefault(complex(r), Fraction(0))
                roots[complex(r)] += k
        for r, ec in curve.factors:
            if not same_root(r, z0):
                roots.setdefault(complex(r), Fraction(0))
                roots[complex(r)] += Fraction(m.w_power * ec, n)
        z0c = complex(z0)
        for r, c in roots.items():
            if c == 0:
                continue
            b = z0c - r
            logs[0] += float(c) * cmath.log(b)
            logs += float(c) * _log1p_series(b, nu)
        if m.differential:
            const *= ep
    return order, const * _exp_series(logs), ep


def _dedupe_inf(m: Monomial, curve: SuperellipticCurve, nu: int) -> np.ndarray:
    n = curve.sheets
    roots: dict = {}
    for r, k in m.z_factors:
        roots.setdefault(complex(r), Fraction(0))
        roots[complex(r)] += k
    for r, ec in curve.factors:
        roots.setdefault(complex(r), Fraction(0))
        roots[complex(r)] += Fraction(m.w_power * ec, n)
    logs = np.zeros(nu, dtype=complex)
    for r, c in roots.items():
        if c == 0 or r == 0:
            continue
        # log(1 - r v) = log(1 + v / (-1/r))
        logs += float(c) * _log1p_series(-1.0 / r, nu)
    return logs


def puncture_series(expr, point, curve: SuperellipticCurve, terms: int = 8) -> LaurentSeries:
    """Truncated Laurent series of ``expr`` at a place, in the local coordinate ``s``.

    For differentials the coefficients are those of ``ds``.
    """
    expr = as_sum(expr)
    z0, index = _place_z(point)
    if not expr.terms:
        return LaurentSeries(0, np.zeros(terms, dtype=complex), curve.ramification(z0))
    orders = [_monomial_order(t, z0, curve) for t in expr.terms]
    lo = min(orders)
    ep = curve.ramification(z0)
    span = max(orders) - lo + terms
    nu = span // ep + 2
    coeffs = np.zeros(span, dtype=complex)
    for t in expr.terms:
        order, ser, _ = _monomial_series(t, z0, index, curve, nu)
        for k, a in enumerate(ser):
            pos = order - lo + k * ep
            if pos < span:
                coeffs[pos] += a
    return LaurentSeries(lo, coeffs[:terms], ep)


def local_order(expr, point, curve: SuperellipticCurve, rtol: float = 1e-10) -> int:
    """Order of vanishing (negative for poles) of ``expr`` at a place."""
    expr = as_sum(expr)
    if not expr.terms:
        raise ExpansionError("the zero expression has no order")
    z0, _ = _place_z(point)
    orders = [_monomial_order(t, z0, curve) for t in expr.terms]
    lo = min(orders)
    if orders.count(lo) == 1:
        return lo
    ser = puncture_series(expr, point, curve, terms=4 * curve.sheets + 8)
    scale = max(abs(t.coeff) for t in expr.terms)
    for k, a in enumerate(ser.coeffs):
        if abs(a) > rtol * scale:
            return ser.order + k
    raise ExpansionError("leading terms cancel beyond the expansion depth")


def residue(expr, point, curve: SuperellipticCurve) -> complex:
    """Residue of a differential at a place (coefficient of ``ds/s``)."""
    expr = as_sum(expr)
    if not expr.differential:
        raise ValueError("residue needs a differential")
    z0, _ = _place_z(point)
    orders = [_monomial_order(t, z0, curve) for t in expr.terms]
    lo = min(orders)
    if lo >= 0:
        return 0.0j
    ser = puncture_series(expr, point, curve, terms=-lo + 1)
    return ser.coefficient(-1)


def support(expr, curve: SuperellipticCurve) -> list:
    """``z`` values where ``expr`` may have zeros or poles, plus all branch values."""
    pts = [r for r, _ in curve.factors]
    for t in as_sum(expr).terms:
        for r, _ in t.z_factors:
            if not any(same_root(r, q) for q in pts):
                pts.append(r)
    return pts + [INF]


def divisor(expr, curve: SuperellipticCurve) -> list:
    """List of ``(Place, order)`` for nonzero orders over the support."""
    out = []
    for z0 in support(expr, curve):
        for pl in curve.places_over(z0):
            k = local_order(expr, pl, curve)
            if k:
                out.append((pl, k))
    return out


def degree(expr, curve: SuperellipticCurve) -> int:
    """Degree of a meromorphic function (number of poles with multiplicity)."""
    return -sum(k for _, k in divisor(expr, curve) if k < 0)


def is_power_on_curve(exponents: dict, power: int, curve: SuperellipticCurve) -> bool:
    """Whether ``prod (z - r)^n`` is a ``power``-th power of a function ``R(z) w^j``.

    ``power`` must equal the sheet count; the test is on exponent vectors mod ``power``.
    """
    if power != curve.sheets:
        raise ValueError("only sheet-count powers are supported")
    roots = list({complex(r) for r in exponents} | {complex(r) for r, _ in curve.factors})

    def vec(d):
        return [sum(k for r, k in d.items() if same_root(r, q)) for q in roots]

    target = vec(exponents)
    fac = vec(dict(curve.factors))
    return any(
        all((t - j * f) % power == 0 for t, f in zip(target, fac)) for j in range(power)
    )


def make_curve(sheets: int, factors: Iterable, punctures: Sequence = ()) -> SuperellipticCurve:
    return SuperellipticCurve(sheets, tuple(factors), tuple(punctures))
