"""Independent reference computations used by the tests.

Nothing here imports :mod:`msforge`.  Run as a script to regenerate
``golden/tables.json``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import numpy as np

GOLDEN = Path(__file__).parent / "golden" / "tables.json"


# --------------------------------------------------------------------------
# quadrature: substitution + composite Simpson


def _simpson(f, a: float, b: float, panels: int) -> float:
    if panels % 2:
        panels += 1
    x = np.linspace(a, b, panels + 1)
    y = f(x)
    h = (b - a) / panels
    return float(h / 3 * (y[0] + y[-1] + 4 * y[1:-1:2].sum() + 2 * y[2:-1:2].sum()))


def simpson_oracle(alpha: Fraction, beta: Fraction, h=lambda x: 1.0 + 0 * x,
                   interval=(0.0, 1.0), panels: int = 10**6) -> float:
    """``int (x-lo)^alpha (hi-x)^beta h(x) dx`` for rational exponents > -1.

    The interval is split at its midpoint.  Near ``lo`` the substitution
    ``x = lo + s^q`` with ``q`` the denominator of ``alpha`` turns the
    endpoint factor into the polynomial weight ``q s^(p+q-1)``; ``hi`` is
    treated the same way.  Both halves then have smooth integrands.
    """
    alpha, beta = Fraction(alpha), Fraction(beta)
    lo, hi = map(float, interval)
    mid = 0.5 * (lo + hi)
    qa, pa = alpha.denominator, alpha.numerator
    qb, pb = beta.denominator, beta.numerator

    def left(s):
        x = lo + s ** qa
        return qa * s ** (pa + qa - 1) * (hi - x) ** float(beta) * h(x)

    def right(s):
        x = hi - s ** qb
        return qb * s ** (pb + qb - 1) * (x - lo) ** float(alpha) * h(x)

    return (_simpson(left, 0.0, (mid - lo) ** (1 / qa), panels // 2)
            + _simpson(right, 0.0, (hi - mid) ** (1 / qb), panels // 2))


def genus_A_B(gamma: int) -> tuple:
    """Constants of the genus family from the oracle."""
    n = gamma + 1
    a = simpson_oracle(Fraction(-1, n), Fraction(-gamma, n), lambda t: (1 + t) ** (-gamma / n))
    b = simpson_oracle(Fraction(1, n), Fraction(-1, n), lambda t: (1 + t) ** (-1 / n))
    return gamma / (gamma + 2) * a, 2 * b


def even_A(k: int, a: float) -> tuple:
    """``(A1, A2, A3)`` of the even family from the oracle."""
    n = k + 1
    a1 = simpson_oracle(Fraction(-2, n), Fraction(1, n), lambda t: (a - t) ** (-1 / n))
    a2 = simpson_oracle(Fraction(-2, n), Fraction(-k, n), lambda t: (a - t) ** (k / n))
    a3 = simpson_oracle(Fraction(-(k - 1), n), Fraction(k, n), lambda t: (a - t) ** (-k / n))
    return a1, a2, a3


def ell2_parts(k: int, a: float) -> tuple:
    n = k + 1
    i1 = simpson_oracle(Fraction(-k, n), Fraction(k, n), lambda t: t ** (-(k + 3) / n), (1.0, a))
    i2 = simpson_oracle(Fraction(k, n), Fraction(-k, n), lambda t: t ** (-(k - 1) / n), (1.0, a))
    return i1, i2


# --------------------------------------------------------------------------
# ramification data by exhaustive search


def _solutions(order: int, count: int, target: int) -> list:
    """Sorted tuples ``2 <= m_1 <= ... <= m_count <= order`` with
    ``order * sum(1 - 1/m_i) == target``."""
    need = Fraction(target, order)  # sum of (1 - 1/m_i)
    out = []

    def rec(prefix, remaining, acc):
        lo = prefix[-1] if prefix else 2
        if remaining == 1:
            inv = 1 - (need - acc)  # 1/m
            if inv > 0 and inv.numerator == 1:
                m = inv.denominator
                if lo <= m <= order:
                    out.append(tuple(prefix + [m]))
            return
        for m in range(lo, order + 1):
            part = acc + Fraction(m - 1, m)
            # the remaining terms contribute at least (1 - 1/m) each
            if part + (remaining - 1) * Fraction(m - 1, m) > need:
                break
            rec(prefix + [m], remaining - 1, part)

    rec([], count, Fraction(0))
    return out


def brute_force_tables(gamma: int) -> dict:
    n = gamma + 1
    rows = {"R": [], "Delta0-swap": [], "Delta0-fixed": []}
    for count in range(1, 5):
        for order in (n, 2 * n, 4 * n):
            rows["R"] += [[count, order, list(ms)] for ms in _solutions(order, count, 2 * gamma)]
        rows["Delta0-swap"] += [[count, 2 * n, list(ms)] for ms in _solutions(2 * n, count, 4 * gamma + 2)]
        rows["Delta0-fixed"] += [[count, 2 * n, list(ms)] for ms in _solutions(2 * n, count, 2 * gamma)]
    return {k: sorted(v) for k, v in rows.items()}


def write_golden(gamma_max: int = 60) -> None:
    data = {str(g): brute_force_tables(g) for g in range(1, gamma_max + 1)}
    GOLDEN.parent.mkdir(exist_ok=True)
    GOLDEN.write_text(json.dumps(data, indent=1, sort_keys=True) + "\n")


if __name__ == "__main__":
    write_golden()
