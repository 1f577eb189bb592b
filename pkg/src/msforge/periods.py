"""Period conditions of the two families, their solution, and the
obstruction reports for the excluded candidate data.

Every closed-form period below reduces a cycle integral to real integrals of
algebraic type on an interval, evaluated with :mod:`msforge.quad`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import quad
from .families import weber_data, weber_segment_loops
from .integrator import ContinuationError, cycle, integrate_over

DEFAULT_DEFECT_TOL = 1e-10
BRACKET_LO = 1.0 + 1e-3
BRACKET_HI = 10.0
BRACKET_CAP = 1e12

NONEXIST_CASES = ("genus1_alt", "even_alt_a_gt_1", "even_alt_0_lt_a_lt_1", "even_alt_a_neg")


class ConvergenceError(RuntimeError):
    """A solver ran out of budget; carries a report for callers that print it."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report or {}


@dataclass(frozen=True)
class Integral:
    value: float
    error: float


@dataclass(frozen=True)
class PeriodIntegrals:
    values: dict

    def __getitem__(self, key) -> float:
        return self.values[key].value

    def __post_init__(self):
        bad = [k for k, v in self.values.items() if not v.value > 0]
        if bad:
            raise ValueError(f"period integrals must be positive: {bad}")


@dataclass
class FamilySpec:
    family: str
    gamma: int | None = None
    k: int | None = None
    c: float | None = None
    a: float | None = None
    roots: list | None = None
    residual: float | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family == "genus" and (self.gamma is None or self.gamma < 1):
            raise ValueError("genus family needs gamma >= 1")
        if self.family == "even" and (self.k is None or self.k < 2 or self.k % 2):
            raise ValueError("even family needs an even k >= 2")
        if self.c is not None and not self.c > 0:
            raise ValueError("c must be positive")
        if self.family == "even" and self.a is not None and not self.a > 1:
            raise ValueError("a must exceed 1")

    def to_json(self) -> dict:
        out = {"family": self.family}
        for key in ("gamma", "k", "c", "a", "roots", "residual"):
            val = getattr(self, key)
            if val is not None:
                out[key] = val
        if self.extra:
            out["extra"] = self.extra
        return out

    @classmethod
    def from_json(cls, data: dict) -> "FamilySpec":
        known = {k: data[k] for k in ("family", "gamma", "k", "c", "a", "roots", "residual") if k in data}
        return cls(**known, extra=dict(data.get("extra", {})))

    def family_params(self) -> dict:
        if self.family == "genus":
            return {"gamma": self.gamma, "c": self.c}
        if self.family == "even":
            return {"k": self.k, "a": self.a}
        if self.family == "weber":
            return {"c": self.c, "roots": self.roots}
        return {}


def save_spec(spec: FamilySpec, path) -> None:
    Path(path).write_text(json.dumps(spec.to_json(), indent=2, sort_keys=True) + "\n")


def load_spec(path) -> FamilySpec:
    return FamilySpec.from_json(json.loads(Path(path).read_text()))


def _int(alpha, beta, h=quad._one, interval=(0.0, 1.0), tol=1e-13) -> Integral:
    r = quad.integrate(quad.AlgebraicIntegrand(alpha, beta, h, interval), tol)
    return Integral(r.value, r.error)


# --------------------------------------------------------------------------
# genus family


def genus_family_integrals(gamma: int) -> PeriodIntegrals:
    if gamma < 1:
        raise ValueError("gamma must be a positive integer")
    n = gamma + 1
    a = _int(-1 / n, -gamma / n, lambda t: (1 + t) ** (-gamma / n))
    b = _int(1 / n, -1 / n, lambda t: (1 + t) ** (-1 / n))
    return PeriodIntegrals({
        "A": Integral(gamma / (gamma + 2) * a.value, gamma / (gamma + 2) * a.error),
        "B": Integral(2 * b.value, 2 * b.error),
    })


def genus_loop_periods(gamma: int, c: float) -> tuple:
    """``(oint eta, oint g^2 eta)`` over the loop around ``[0, 1]``."""
    ints = genus_family_integrals(gamma)
    s = math.sin(gamma * math.pi / (gamma + 1))
    return -2 * s * ints["A"], -2 * c * c * s * ints["B"]


def solve_c(gamma: int) -> float:
    ints = genus_family_integrals(gamma)
    return math.sqrt(ints["A"] / ints["B"])


# --------------------------------------------------------------------------
# even family


def even_family_integrals(k: int, a: float) -> PeriodIntegrals:
    if k < 2 or k % 2:
        raise ValueError("k must be an even integer >= 2")
    if not a > 1:
        raise ValueError("a must exceed 1")
    n = k + 1
    a1 = _int(-2 / n, 1 / n, lambda t: (a - t) ** (-1 / n))
    a2 = _int(-2 / n, -k / n, lambda t: (a - t) ** (k / n))
    a3 = _int(-(k - 1) / n, k / n, lambda t: (a - t) ** (-k / n))
    return PeriodIntegrals({"A1": a1, "A2": a2, "A3": a3})


def even_family_defect(k: int, a: float) -> float:
    """``F(a) = k A1 + 2 a^((k-2)/(k+1)) A3 - A2``; zero exactly at the solution."""
    ints = even_family_integrals(k, a)
    return k * ints["A1"] + 2 * a ** ((k - 2) / (k + 1)) * ints["A3"] - ints["A2"]


def ell1_periods(k: int, a: float) -> tuple:
    """``(oint eta, oint g^2 eta)`` over the loop around ``[0, 1]`` in closed form."""
    n = k + 1
    ints = even_family_integrals(k, a)
    s = math.sin(math.pi / n)
    i_eta = 1j * np.exp(-1j * math.pi / n) * s * (k * ints["A1"] - ints["A2"])
    i_g2 = 2j * np.exp(1j * math.pi / n) * s * a ** ((k - 2) / n) * ints["A3"]
    return complex(i_eta), complex(i_g2)


def bracket_a(k: int) -> tuple:
    """Interval with ``F > 0`` at the left end and ``F < 0`` at the right end.

    The signs at both ends are certified by the beta-function sandwich of
    :func:`msforge.quad.period_defect_bounds`, not by the quadrature itself.
    """
    lo, hi = BRACKET_LO, BRACKET_HI
    if quad.period_defect_bounds(k, lo)[0] <= 0:
        raise ConvergenceError("left bracket end is not certified positive")
    while quad.period_defect_bounds(k, hi)[1] >= 0:
        hi *= 2
        if hi > BRACKET_CAP:
            raise ConvergenceError("no certified sign change below the bracket cap")
    return lo, hi


def solve_a(k: int, tol: float = DEFAULT_DEFECT_TOL, max_iter: int = 400) -> float:
    """Unique root of the even-family defect by bisection on a certified bracket."""
    lo, hi = bracket_a(k)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi) if hi / lo < 4 else math.sqrt(lo * hi)
        f = even_family_defect(k, mid)
        if abs(f) < tol:
            return mid
        if f > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-15 * hi:
            return mid
    raise ConvergenceError(f"bisection did not reach |F| < {tol:g}")


def ell2_integrals(k: int, a: float) -> tuple:
    """``(oint eta, oint g^2 eta)`` over the loop around ``[1, a]``."""
    n = k + 1
    c2 = a ** ((k - 2) / n)
    s = math.sin(k * math.pi / n)
    i1 = _int(-k / n, k / n, lambda t: t ** (-(k + 3) / n), (1.0, a)).value
    i2 = _int(k / n, -k / n, lambda t: t ** (-(k - 1) / n), (1.0, a)).value
    return 2j * s * i1, -2j * c2 * s * i2


def ell2_closure_check(k: int, a: float) -> float:
    if k < 2 or k % 2:
        raise ValueError("k must be an even integer >= 2")
    if not a > 1:
        raise ValueError("a must exceed 1")
    i_eta, i_g2 = ell2_integrals(k, a)
    return abs(i_eta - np.conj(i_g2))


# --------------------------------------------------------------------------
# obstructions


def default_grid(case: str, n: int = 64) -> np.ndarray:
    if case == "genus1_alt":
        return np.geomspace(1e-3, 1e3, n)
    if case == "even_alt_a_gt_1":
        return 1.0 + np.geomspace(1e-3, 1e3, n)
    if case == "even_alt_0_lt_a_lt_1":
        return np.geomspace(1e-3, 1.0 - 1e-3, n)
    if case == "even_alt_a_neg":
        return -np.geomspace(1e-3, 1e3, n)
    raise ValueError(f"unknown case {case!r}")


def _in_range(case, x) -> bool:
    return {
        "genus1_alt": x > 0,
        "even_alt_a_gt_1": x > 1,
        "even_alt_0_lt_a_lt_1": 0 < x < 1,
        "even_alt_a_neg": x < 0,
    }[case]


def _sides(case: str, x: float) -> dict:
    """Both sides of the real period identity with the positive factor ``c^2``
    left symbolic: ``lhs = c^2 * rhs_coeff`` is required."""
    third = 1.0 / 3.0
    if case == "genus1_alt":
        lhs = -_int(0.5, -0.5, lambda t: (1 + t) ** -0.5).value
        rhs = _int(-0.5, 0.5, lambda t: (1 + t) ** 0.5).value
        return {"lhs": lhs, "rhs_coeff": rhs}
    if case == "even_alt_a_gt_1":
        a = x
        lhs = -(_int(-2 * third, -third, lambda t: (a - t) ** (2 * third)).value
                + _int(-2 * third, 2 * third, lambda t: (a - t) ** -third).value)
        rhs = _int(-third, -2 * third, lambda t: (a - t) ** (-2 * third)).value
        return {"lhs": lhs, "rhs_coeff": rhs}
    if case in ("even_alt_0_lt_a_lt_1", "claim1"):
        a = x
        lhs = -(a * _int(-2 * third, 2 * third, lambda t: (1 - a * t) ** -third).value
                + _int(-2 * third, -third, lambda t: (1 - a * t) ** (2 * third)).value)
        rhs = _int(-third, -2 * third, lambda t: (1 - a * t) ** (-2 * third)).value
        return {"lhs": lhs, "rhs_coeff": rhs}
    if case == "claim2":
        a = x
        lhs = (-_int(-2 * third, -third, lambda t: (t - a) ** (2 * third)).value
               + _int(-2 * third, 2 * third, lambda t: (t - a) ** -third).value)
        rhs = _int(-third, -2 * third, lambda t: (t - a) ** (-2 * third)).value
        return {"lhs": lhs, "rhs_coeff": rhs}
    raise ValueError(case)


def claim_bounds(a: float) -> dict:
    """Beta-function upper bounds for the two left-hand sides when ``a < 0``."""
    b = quad.beta(1 / 3, 2 / 3)
    out = {}
    if -1.5 <= a < 0:
        out["claim1"] = -(2 * a / 3 + 1) * b
    if a <= -2 / 3:
        out["claim2"] = (-a) ** (-1 / 3) * (a + 2 / 3) * b
    return out


def nonexistence_report(case: str, samples=None) -> dict:
    """Evaluate the period identity of an excluded candidate over a grid.

    The identity has the form ``lhs = c^2 * rhs_coeff`` with ``c > 0``, and
    ``rhs_coeff > 0`` always, so the candidate is obstructed at a sample as
    soon as ``lhs < 0``.  For ``a < 0`` two different cycles give two
    identities; each sample must be obstructed by at least one of them, and
    a beta-function bound certifies the sign of the one used.
    """
    if case not in NONEXIST_CASES:
        raise ValueError(f"unknown case {case!r}; expected one of {NONEXIST_CASES}")
    grid = default_grid(case) if samples is None else np.asarray(samples, dtype=float)
    bad = [float(x) for x in grid if not _in_range(case, x)]
    if bad:
        raise ValueError(f"samples outside the range of {case}: {bad[:3]}")
    rows = []
    for x in grid:
        x = float(x)
        if case != "even_alt_a_neg":
            s = _sides(case, x)
            rows.append({"param": x, **s, "obstructed": s["lhs"] < 0 < s["rhs_coeff"]})
            continue
        bounds = claim_bounds(x)
        row = {"param": x, "claims": {}}
        for name, bound in bounds.items():
            s = _sides(name, x)
            row["claims"][name] = {
                **s,
                "bound": bound,
                "certified": bound <= 0 and s["lhs"] <= bound + 1e-12,
            }
        row["obstructed"] = any(
            v["certified"] and v["lhs"] < 0 < v["rhs_coeff"] for v in row["claims"].values()
        )
        rows.append(row)
    report = {
        "case": case,
        "samples": len(rows),
        "rows": rows,
        "obstructed": all(r["obstructed"] for r in rows),
    }
    if case == "even_alt_a_neg":
        lo, hi = -1.5, -2 / 3
        report["claim_overlap"] = [lo, hi]
        report["coverage"] = lo <= hi
    return report


# --------------------------------------------------------------------------
# weber family


def _weber_unpack(x: np.ndarray) -> tuple:
    c = math.exp(x[0])
    roots = [1.0]
    for u in x[1:]:
        roots.append(roots[-1] + math.exp(u))
    return c, roots


def _weber_pack(c, roots) -> np.ndarray:
    return np.array([math.log(c)] + [math.log(b - a) for a, b in zip(roots, roots[1:])])


def weber_residuals(c: float, roots) -> np.ndarray:
    """Real and imaginary parts of ``oint eta - conj(oint g^2 eta)`` on each
    segment loop; ``Re oint g eta`` vanishes identically for this family."""
    data = weber_data(c, roots)
    curve = data.curve
    out = []
    g2eta = data.g * data.g * data.eta
    for _, pieces in weber_segment_loops(roots):
        w0 = curve.sheet_values(pieces[0].start)[0]
        i_eta, i_g2 = integrate_over([data.eta, g2eta], cycle(w0, *pieces), curve, tol=1e-11)
        d = i_eta - np.conj(i_g2)
        out += [d.real, d.imag]
    return np.array(out)


def weber_solve(gamma: int, tol: float = 1e-8, x0=None, max_iter: int = 60) -> dict:
    """Damped Gauss-Newton on ``(log c, log(a_{i+1} - a_i))``.

    Returns a dict with ``converged`` and the parameters; the caller decides
    how to report a failure.
    """
    if gamma < 1:
        raise ValueError("gamma must be a positive integer")
    if x0 is None:
        x = _weber_pack(1.0, [1.0 + i for i in range(2 * gamma)])
    else:
        x = _weber_pack(x0[0], list(x0[1]))
    history = []
    r = weber_residuals(*_weber_unpack(x))
    for it in range(max_iter):
        norm = float(np.max(np.abs(r)))
        history.append(norm)
        if norm < tol:
            c, roots = _weber_unpack(x)
            return {"gamma": gamma, "c": c, "roots": roots, "residual": norm,
                    "iterations": it, "converged": True}
        h = 1e-6
        jac = np.empty((r.size, x.size))
        for j in range(x.size):
            xp = x.copy()
            xp[j] += h
            jac[:, j] = (weber_residuals(*_weber_unpack(xp)) - r) / h
        step = np.linalg.lstsq(jac, -r, rcond=None)[0]
        lam = 1.0
        while lam > 1e-4:
            xn = x + lam * step
            try:
                rn = weber_residuals(*_weber_unpack(xn))
            except (ContinuationError, ValueError, OverflowError):
                lam *= 0.5
                continue
            if np.max(np.abs(rn)) < norm:
                x, r = xn, rn
                break
            lam *= 0.5
        else:
            break
    c, roots = _weber_unpack(x)
    return {"gamma": gamma, "c": c, "roots": roots, "residual": float(np.max(np.abs(r))),
            "iterations": len(history), "converged": False, "history": history}
