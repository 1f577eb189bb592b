"""Registry of the concrete surface families: curves, Weierstrass data,
basepoints, homology generators and symmetries.

Conventions
-----------
genus family, parameter ``gamma``
    ``w^(gamma+1) = z (z^2 - 1)^gamma``, ``g = c w``, ``eta = i dz / (z^2 w)``,
    ends over ``z = 0`` and ``z = inf``.  Basepoint ``z = 1/2`` with
    ``w = |z (z^2-1)^gamma|^(1/N) exp(i gamma pi / N)``.
even family, parameter ``k`` (even)
    ``w^(k+1) = z^2 ((z-1)/(z-a))^k``, ``g = c w`` with
    ``c = a^((k-2)/(2k+2))``, ``eta = dz / (z w)``.  Basepoint ``z = 1/2`` on
    the sheet where ``w`` is real and positive.
weber family, parameters ``1 = a_1 < a_2 < ... < a_2gamma`` and ``c``
    ``w^2 = z F_1 / F_2``, ``g = c w / (z + 1)``, ``eta = (z+1)^2 dz / (z w)``.
catenoid
    the trivial one-sheeted curve, ``g = z``, ``eta = dz / z^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .curve import DZ, INF, W, Z, CurvePoint, SuperellipticCurve, make_curve
from .integrator import (
    Arc,
    Cycle,
    Line,
    WeierstrassData,
    cycle,
    place_loop,
    residue_radius,
    stadium,
)
from .symmetry import SymmetryOp, image_segment, rotation_z

FAMILIES = ("genus", "even", "weber", "catenoid")


@dataclass
class Family:
    """Everything needed to verify and draw one member of a family."""

    name: str
    data: WeierstrassData
    basepoint: CurvePoint
    generators: list
    symmetries: list = field(default_factory=list)
    params: dict = field(default_factory=dict)

    @property
    def curve(self) -> SuperellipticCurve:
        return self.data.curve


def puncture_loops(curve: SuperellipticCurve, exprs=()) -> list:
    loops = []
    for p in curve.punctures:
        for pl in curve.places_over(p.z):
            loops.append(place_loop(curve, pl, residue_radius(curve, pl.z, exprs)))
    return loops


def _on_sheets(curve, pieces, label) -> list:
    z0 = pieces[0].start
    return [cycle(w0, *pieces, label=f"{label}#{j}") for j, w0 in enumerate(curve.sheet_values(z0))]


# --------------------------------------------------------------------------
# genus family


def genus_curve(gamma: int) -> SuperellipticCurve:
    if gamma < 1:
        raise ValueError("gamma must be a positive integer")
    return make_curve(gamma + 1, [(0, 1), (1, gamma), (-1, gamma)], [0, INF])


def genus_data(gamma: int, c: float) -> WeierstrassData:
    return WeierstrassData(c * W(1), 1j * DZ * Z(0, -2) * W(-1), genus_curve(gamma),
                           "genus", {"gamma": gamma, "c": c})


def genus_basepoint(gamma: int) -> CurvePoint:
    n = gamma + 1
    z = 0.5
    mod = abs(z * (z * z - 1) ** gamma) ** (1.0 / n)
    return CurvePoint(z, mod * np.exp(1j * gamma * math.pi / n))


def genus_symmetries(gamma: int) -> list:
    n = gamma + 1
    th = math.pi / n
    k1 = SymmetryOp("kappa1", np.diag([-1.0, 1.0, -1.0]), anti=True)
    k2 = SymmetryOp(
        "kappa2",
        np.array([[-math.cos(th), math.sin(th), 0.0],
                  [-math.sin(th), -math.cos(th), 0.0],
                  [0.0, 0.0, -1.0]]),
        alpha=-1.0, beta=np.exp(1j * th),
    )
    return [k1, k2]


def genus_generators(gamma: int) -> list:
    curve = genus_curve(gamma)
    gens = _on_sheets(curve, stadium(0.0, 1.0, 0.3), "loop[0,1]")
    gens += _on_sheets(curve, stadium(-1.0, 0.0, 0.3), "loop[-1,0]")
    return gens + puncture_loops(curve)


def genus_family(gamma: int, c: float) -> Family:
    return Family("genus", genus_data(gamma, c), genus_basepoint(gamma),
                  genus_generators(gamma), genus_symmetries(gamma), {"gamma": gamma, "c": c})


# --------------------------------------------------------------------------
# even family


def _check_even(k: int):
    if k < 2 or k % 2:
        raise ValueError("k must be an even integer >= 2")


def even_c(k: int, a: float) -> float:
    return a ** ((k - 2) / (2 * k + 2))


def even_curve(k: int, a: float) -> SuperellipticCurve:
    _check_even(k)
    if not a > 1:
        raise ValueError("a must exceed 1")
    return make_curve(k + 1, [(0, 2), (1, k), (a, -k)], [0, INF])


def even_data(k: int, a: float) -> WeierstrassData:
    c = even_c(k, a)
    return WeierstrassData(c * W(1), DZ * Z(0, -1) * W(-1), even_curve(k, a),
                           "even", {"k": k, "a": a, "c": c})


def even_basepoint(k: int, a: float) -> CurvePoint:
    z = 0.5
    w = (z * z * ((1 - z) / (a - z)) ** k) ** (1.0 / (k + 1))
    return CurvePoint(z, complex(w))


def even_symmetries(k: int, a: float) -> list:
    n = k + 1
    c = even_c(k, a)
    k1 = SymmetryOp("kappa1", np.diag([1.0, -1.0, 1.0]), anti=True)
    k2 = SymmetryOp("kappa2", rotation_z(2 * math.pi / n), beta=np.exp(2j * math.pi / n))
    k3 = SymmetryOp("kappa3", np.diag([1.0, -1.0, -1.0]), alpha=a, zpow=-1,
                    beta=1.0 / (c * c), wpow=-1)
    return [k1, k2, k3]


def ell1_prime(k: int, a: float) -> tuple:
    """Loop from ``z = 1/2`` winding ``(k+2)/2`` times about 0 and once about 1.

    A plain loop around ``[0, 1]`` does not close on the curve; the extra
    turns about the end at 0 fix the sheet without changing the periods of
    forms with zero residue there.
    """
    r0 = 0.2
    r1 = 0.25 * min(1.0, a - 1.0)
    return (
        Line(0.5, r0),
        Arc(0.0, r0, 0.0, math.pi * (k + 2)),
        Line(r0, 1.0 - r1),
        Arc(1.0, r1, math.pi, 2 * math.pi),
        Line(1.0 - r1, 0.5),
    )


def ell2(k: int, a: float) -> tuple:
    return stadium(1.0, a, 0.3 * min(1.0, a - 1.0))


def even_generators(k: int, a: float) -> list:
    curve = even_curve(k, a)
    gens = _on_sheets(curve, ell1_prime(k, a), "ell1'")
    gens += _on_sheets(curve, ell2(k, a), "ell2")
    k1, _, k3 = even_symmetries(k, a)
    gens += [image_segment(k3, g) for g in gens[: curve.sheets]]
    gens += [image_segment(k1, g) for g in gens[: curve.sheets]]
    return gens + puncture_loops(curve)


def even_family(k: int, a: float) -> Family:
    data = even_data(k, a)
    return Family("even", data, even_basepoint(k, a), even_generators(k, a),
                  even_symmetries(k, a), dict(data.params))


# --------------------------------------------------------------------------
# weber family


def weber_curve(roots) -> SuperellipticCurve:
    """``roots = (a_1, ..., a_2gamma)`` increasing, ``a_1 = 1``."""
    roots = [float(r) for r in roots]
    if len(roots) % 2 or not roots or any(b <= a for a, b in zip(roots, roots[1:])) or roots[0] <= 0:
        raise ValueError("need an increasing list 0 < a_1 < ... < a_2gamma")
    factors = [(0, 1)] + [(r, 1 if i % 2 == 0 else -1) for i, r in enumerate(roots)]
    return make_curve(2, factors, [0, INF])


def weber_data(c: float, roots) -> WeierstrassData:
    g = c * W(1) * Z(-1, -1)
    eta = DZ * Z(-1, 2) * Z(0, -1) * W(-1)
    return WeierstrassData(g, eta, weber_curve(roots), "weber", {"c": c, "roots": list(roots)})


def weber_segment_loops(roots) -> list:
    """One loop per gap of consecutive real branch points ``0, a_1, ..., a_2gamma``."""
    pts = [0.0] + [float(r) for r in roots]
    gaps = np.diff(pts)
    loops = []
    for i, (lo, hi) in enumerate(zip(pts, pts[1:])):
        near = [gaps[i]] + ([gaps[i - 1]] if i else []) + ([gaps[i + 1]] if i + 1 < len(gaps) else [])
        rho = 0.3 * min(near + [1.0])
        loops.append((f"loop[{lo:g},{hi:g}]", stadium(lo, hi, rho)))
    return loops


def weber_generators(roots) -> list:
    curve = weber_curve(roots)
    gens = []
    for label, pieces in weber_segment_loops(roots):
        gens += _on_sheets(curve, pieces, label)
    data_exprs = list(weber_data(1.0, roots).phi)
    return gens + puncture_loops(curve, data_exprs)


def weber_basepoint(roots) -> CurvePoint:
    z = 0.5 * roots[0]
    curve = weber_curve(roots)
    return CurvePoint(z, complex(curve.sheet_values(z)[0]))


def weber_family(c: float, roots) -> Family:
    data = weber_data(c, roots)
    return Family("weber", data, weber_basepoint(roots), weber_generators(roots), [],
                  {"c": c, "roots": list(roots)})


# --------------------------------------------------------------------------
# catenoid


def catenoid_curve() -> SuperellipticCurve:
    return make_curve(1, [], [0, INF])


def catenoid_data() -> WeierstrassData:
    return WeierstrassData(Z(0, 1), DZ * Z(0, -2), catenoid_curve(), "catenoid", {})


def catenoid_family() -> Family:
    curve = catenoid_curve()
    loop = cycle(1.0, Arc(0.0, 1.0, 0.0, 2 * math.pi), label="unit circle")
    syms = [
        SymmetryOp("reflect_x2", np.diag([1.0, -1.0, 1.0]), anti=True),
        SymmetryOp("rotate_z", rotation_z(math.pi / 2), alpha=1j),
    ]
    return Family("catenoid", catenoid_data(), CurvePoint(1.0, 1.0), [loop] + puncture_loops(curve), syms, {})


def catenoid_point(z) -> np.ndarray:
    """Closed form of ``Re int_1^z Phi`` for the catenoid data."""
    z = complex(z)
    r, th = abs(z), np.angle(z)
    s = r + 1.0 / r
    return np.array([-(s * math.cos(th)) + 2.0, -(s * math.sin(th)), 2.0 * math.log(r)])


def build_family(name: str, **params) -> Family:
    if name == "genus":
        return genus_family(int(params["gamma"]), float(params["c"]))
    if name == "even":
        return even_family(int(params["k"]), float(params["a"]))
    if name == "weber":
        return weber_family(float(params["c"]), params["roots"])
    if name == "catenoid":
        return catenoid_family()
    raise ValueError(f"unknown family {name!r}; expected one of {FAMILIES}")
