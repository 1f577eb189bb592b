"""Ramification data of symmetry quotients for genus-``gamma`` surfaces with
two ends, and the catalog of candidate Weierstrass data they lead to.

Two Riemann-Hurwitz counts are solved here.  For the cyclic group ``R``
fixing both ends,

    2 gamma = sum_i (m_i - 1) |R| / m_i,   |R| in {gamma+1, 2(gamma+1), 4(gamma+1)}.

For the group ``Delta_0`` of order ``2(gamma+1)``,

    4 gamma + 2 = 2 (gamma+1) sum_i (1 - 1/m_i)   if an element swaps the ends,
    2 gamma     = 2 (gamma+1) sum_i (1 - 1/m_i)   otherwise.

Rows are produced from closed-form families; the tests compare them with an
exhaustive search.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .curve import MalformedCurveError, genus, is_power_on_curve, make_curve
from .symmetry import SymmetryOp


@dataclass(frozen=True)
class RamificationCase:
    kind: str  # "R", "Delta0-swap" or "Delta0-fixed"
    count: int  # t for R, s for Delta0
    order: int
    ms: tuple
    constraint: str = "arbitrary"

    def __post_init__(self):
        if list(self.ms) != sorted(self.ms):
            raise ValueError("multiplicities must be sorted")
        if any(m < 2 or m > self.order for m in self.ms):
            raise ValueError("multiplicities must lie in [2, order]")

    def lhs(self, gamma: int) -> Fraction:
        return sum((Fraction(m - 1, m) * self.order for m in self.ms), Fraction(0))

    def holds(self, gamma: int) -> bool:
        """The defining identity, in exact rational arithmetic."""
        target = {"R": 2 * gamma, "Delta0-swap": 4 * gamma + 2, "Delta0-fixed": 2 * gamma}[self.kind]
        return self.lhs(gamma) == target

    def to_json(self) -> dict:
        return {"kind": self.kind, "count": self.count, "order": self.order,
                "ms": list(self.ms), "constraint": self.constraint}


def enumerate_R_cases(gamma: int) -> list:
    """Solutions of the count for ``R``, ordered by ``t``."""
    if gamma < 1:
        raise ValueError("gamma must be a positive integer")
    n = gamma + 1
    rows = [
        RamificationCase("R", 1, 2 * n, (n,)),
        RamificationCase("R", 2, n, (n, n)),
    ]
    if gamma % 2 and gamma > 1:
        rows.append(RamificationCase("R", 3, n, tuple(sorted((2, 2, n // 2))), "odd (>1)"))
    for m3, g in ((3, 11), (4, 23), (5, 59)):
        if gamma == g:
            rows.append(RamificationCase("R", 3, n, (2, 3, m3), f"gamma={g}"))
    return rows


def enumerate_Delta0_cases(gamma: int, swap: bool) -> list:
    """Solutions of the count for ``Delta_0``.

    ``swap`` selects whether some element exchanges the two ends.
    """
    if gamma < 1:
        raise ValueError("gamma must be a positive integer")
    n = gamma + 1
    if not swap:
        return [RamificationCase("Delta0-fixed", 1, 2 * n, (n,))]
    rows = [
        RamificationCase("Delta0-swap", 2, 2 * n, (2 * n, 2 * n)),
        RamificationCase("Delta0-swap", 3, 2 * n, tuple(sorted((2, 2, n)))),
    ]
    for m3, g in ((3, 5), (4, 11), (5, 29)):
        if gamma == g:
            rows.append(RamificationCase("Delta0-swap", 3, 2 * n, (2, 3, m3), f"gamma={g}"))
    return rows


def admissible_cases(gamma: int) -> dict:
    """The rows the construction actually continues with.

    ``t = 1`` reduces to ``t = 2`` by passing to ``R^2``, and ``t = 3`` is
    discarded; both ``Delta_0`` tables are kept.  The coprimality conditions
    on exponents are enforced later, when candidate curves are built
    (:func:`msforge.curve.make_curve` rejects reducible equations).
    """
    return {
        "R": [c for c in enumerate_R_cases(gamma) if c.count == 2],
        "Delta0-swap": enumerate_Delta0_cases(gamma, True),
        "Delta0-fixed": enumerate_Delta0_cases(gamma, False),
    }


def tables(gamma_max: int = 60) -> dict:
    """All rows for ``1 <= gamma <= gamma_max`` in JSON-ready form."""
    out = {}
    for g in range(1, gamma_max + 1):
        out[str(g)] = {
            "R": [c.to_json() for c in enumerate_R_cases(g)],
            "Delta0-swap": [c.to_json() for c in enumerate_Delta0_cases(g, True)],
            "Delta0-fixed": [c.to_json() for c in enumerate_Delta0_cases(g, False)],
        }
    return out


def format_table(gamma: int) -> str:
    lines = [f"gamma = {gamma}"]
    groups = (("R", enumerate_R_cases(gamma)),
              ("Delta0, ends exchanged", enumerate_Delta0_cases(gamma, True)),
              ("Delta0, ends fixed", enumerate_Delta0_cases(gamma, False)))
    for title, rows in groups:
        lines.append(f"  {title}")
        lines.append(f"    {'count':>5}  {'order':>5}  {'m_i':<16} constraint")
        for c in rows:
            ms = ", ".join(map(str, c.ms))
            lines.append(f"    {c.count:>5}  {c.order:>5}  {ms:<16} {c.constraint}")
    return "\n".join(lines)


# --------------------------------------------------------------------------
# candidate data


STATUSES = ("constructed", "excluded-by-period", "excluded-by-genus", "excluded-by-symmetry")


@dataclass
class CandidateData:
    curve: str
    g: str
    eta: str
    transformations: list
    status: str
    reason: str
    check: Callable[[], bool] = field(repr=False, default=lambda: True)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    def verify(self) -> bool:
        """Run the machine check attached to the status."""
        return bool(self.check())

    def to_json(self) -> dict:
        return {"curve": self.curve, "g": self.g, "eta": self.eta,
                "transformations": self.transformations, "status": self.status,
                "reason": self.reason}


def _wrong_genus(sheets, factors, gamma) -> bool:
    """True when the equation is reducible or its genus differs from ``gamma``."""
    try:
        return genus(make_curve(sheets, factors)) != gamma
    except MalformedCurveError:
        return True


def _not_power(sheets, factors, exps) -> bool:
    return not is_power_on_curve(exps, sheets, make_curve(sheets, factors))


def _genus_exceeds(gamma: int) -> bool:
    n = gamma + 1
    roots = [complex(np.exp(1j * np.pi * j / n)) for j in range(2 * n)]
    big = make_curve(n, [(r, gamma // 2) for r in roots])
    return genus(big) == gamma * gamma and gamma * gamma > gamma


def _swaps_ends(sheets, factors) -> bool:
    curve = make_curve(sheets, factors)
    sigma = SymmetryOp("sigma", np.eye(3), zpow=-1)
    # sigma(z) = 1/z sends the end over 0 to the end over infinity
    return sigma.preserves(curve) and abs(complex(sigma.map_z(np.array(1e-9)))) > 1e8


def candidate_catalog(gamma: int, d_profile: tuple) -> list:
    """Terminal candidates for ``(gamma, (d1, d2))``.

    Supported profiles: ``(1, (1, 3))`` and even ``gamma`` with ``(2, 2)``.
    """
    d_profile = tuple(sorted(d_profile))
    if gamma == 1 and d_profile == (1, 3):
        return [
            CandidateData("w^2 = z (z^2 - 1)", "c w", "c' dz / (z^2 w)", ["R(z,w) = (-z, i w)"],
                          "constructed", "periods.solve_c closes every period",
                          lambda: genus(make_curve(2, [(0, 1), (1, 1), (-1, 1)])) == 1),
            CandidateData("w^2 = z (z^2 - 1)", "c w", "c' dz / (z w)", ["R(z,w) = (-z, i w)"],
                          "excluded-by-period", "nonexistence_report:genus1_alt",
                          lambda: _nonexist("genus1_alt")),
        ]
    if gamma >= 2 and gamma % 2 == 0 and d_profile == (2, 2):
        n = gamma + 1
        h = gamma // 2
        rot = f"R(z,w) = (z, exp(2 pi i/{n}) w)"
        out = [
            CandidateData(f"w^{n} = z^2 ((z-1)/(z-a))^{gamma}", "c w", "c' dz / (z w)",
                          [rot, "sigma(z,w) = (a/z, a^((g+2)/(g+1)) / w)", "(z,w) -> (conj z, conj w)"],
                          "constructed", "periods.solve_a closes every period",
                          lambda: genus(make_curve(n, [(0, 2), (1, gamma), (2.0, -gamma)])) == gamma),
            CandidateData(f"w^{n} = z^2 (z^2-1)^{h}", "c w", "c''' dz / (z^((g-1)/(g+1)) g^2)",
                          [rot, "tau(z,w) = (-z, w)"],
                          "excluded-by-genus",
                          f"eta needs z = u^{n}; v^{n} = (u^{2 * n} - 1)^{h} has genus {gamma * gamma}",
                          lambda: _not_power(n, [(0, 2), (1, h), (-1, h)], {0: -(gamma - 1)})
                          and _genus_exceeds(gamma)),
            CandidateData(f"w^{n} = (z^2-1)^{h + 1} / z^{n}", "c / w", "-",
                          [rot, "tau(z,w) = (-z, w)"],
                          "excluded-by-genus", "z is not a branch value, so the genus drops below gamma",
                          lambda: _wrong_genus(n, [(0, -n), (1, h + 1), (-1, h + 1)], gamma)),
        ]
        rhs2 = [(0, -gamma), (1, h + 1), (-1, h + 1)]
        if gamma == 2:
            out.append(CandidateData(
                "w^3 = (z^2-1)^2 / z^2", "c / w", "c'' w dz / z",
                [rot, "tau(z,w) = (-z, w)", "sigma(z,w) = (1/z, w)"],
                "excluded-by-symmetry", "sigma exchanges the two ends, contrary to the assumption",
                lambda: _swaps_ends(3, rhs2)))
        else:
            out.append(CandidateData(
                f"w^{n} = (z^2-1)^{h + 1} / z^{gamma}", "c / w", "-",
                [rot, "tau(z,w) = (-z, w)"],
                "excluded-by-genus", "eta^(g+1) divisor is not a (g+1)-th power on the curve",
                lambda: _not_power(n, rhs2, {1: 2, -1: 2, 0: -(gamma + 3)})))
        for nn in (1, 2):
            if gamma + 2 - 2 * nn <= 0:
                continue
            facs = [(0, nn), (1, gamma + 2 - 2 * nn), (-1, -(gamma + 2))]
            out.append(CandidateData(
                f"w^{n} = z^{nn} (z-1)^{gamma + 2 - 2 * nn} / (z+1)^{gamma + 2}", "c w", "-",
                [rot, "sigma(z,w) = (1/z, w)"],
                "excluded-by-genus", "eta^(g+1) divisor is not a (g+1)-th power on the curve",
                lambda facs=facs: _not_power(n, facs, {-1: gamma + 4, 0: -(gamma + 3), 1: -gamma})))
        out.append(CandidateData(
            f"w^{n} = z ((z-1)/(z-a))^{n}", "c w", "-", [rot],
            "excluded-by-genus", "1 and a are not branch values, so the curve has genus 0",
            lambda: _wrong_genus(n, [(0, 1), (1, n), (2.0, -n)], gamma)))
        if gamma == 2:
            out.append(CandidateData(
                "w^3 = (z-1)^2 (z+1)^2 / z^2", "c / w", "c' w dz / z",
                [rot, "sigma(z,w) = (1/z, w)"],
                "excluded-by-period", "nonexistence_report:even_alt_a_neg (a = -1)",
                lambda: _nonexist("even_alt_a_neg", [-1.0])))
            out.append(CandidateData(
                "w^3 = (z-1)^2 (z-a)^2 / z^2", "c / w", "c' w dz / z",
                [rot, "sigma(z,w) = (a/z, w)", "(z,w) -> (conj z, conj w)"],
                "excluded-by-period",
                "nonexistence_report:even_alt_a_gt_1, even_alt_0_lt_a_lt_1, even_alt_a_neg",
                lambda: all(_nonexist(c) for c in ("even_alt_a_gt_1", "even_alt_0_lt_a_lt_1", "even_alt_a_neg"))))
        return out
    raise ValueError(f"unsupported profile {d_profile} for gamma={gamma}")


def _nonexist(case, samples=None) -> bool:
    from .periods import nonexistence_report

    return nonexistence_report(case, samples)["obstructed"]


__all__ = [
    "RamificationCase", "CandidateData", "enumerate_R_cases", "enumerate_Delta0_cases",
    "admissible_cases", "tables", "format_table", "candidate_catalog"
]
