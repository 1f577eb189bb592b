"""Quadrature for ``(x - lo)^alpha (hi - x)^beta h(x)`` on ``(lo, hi)``.

The workhorse is tanh-sinh: the endpoint factors are evaluated from the
exactly-represented distances ``t`` and ``1 - t`` so that nodes can be pushed
to within ``exp(-700)`` of either endpoint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import roots_jacobi

DEFAULT_TOL = 1e-12
MAX_LEVELS = 12
_V_MAX = 350.0  # exp(2*350) still fits in a double
_U_MAX = math.asinh(2.0 * _V_MAX / math.pi)


class QuadratureError(RuntimeError):
    pass


def _one(x):
    return np.ones_like(x)


@dataclass(frozen=True)
class AlgebraicIntegrand:
    alpha: float
    beta: float
    h: Callable = _one
    interval: tuple = (0.0, 1.0)

    def __post_init__(self):
        if not (self.alpha > -1 and self.beta > -1):
            raise ValueError(f"endpoint exponents must exceed -1, got {self.alpha}, {self.beta}")
        lo, hi = self.interval
        if not hi > lo:
            raise ValueError("empty or reversed interval")

    def __call__(self, x):
        lo, hi = self.interval
        x = np.asarray(x, dtype=float)
        return (x - lo) ** self.alpha * (hi - x) ** self.beta * self.h(x)


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    levels: int
    evaluations: int

    def __float__(self):
        return float(self.value)


def _level_nodes(step: float, odd_only: bool):
    kmax = int(_U_MAX / step)
    k = np.arange(-kmax, kmax + 1)
    if odd_only:
        k = k[k % 2 != 0]
    u = k * step
    v = 0.5 * math.pi * np.sinh(u)
    t = 1.0 / (1.0 + np.exp(-2.0 * v))
    omt = 1.0 / (1.0 + np.exp(2.0 * v))
    jac = math.pi * np.cosh(u)
    return t, omt, jac


def integrate(integrand: AlgebraicIntegrand, tol: float = DEFAULT_TOL,
              max_levels: int = MAX_LEVELS, min_levels: int = 3) -> QuadResult:
    """Tanh-sinh quadrature with level doubling.

    Returns the value with an a-posteriori error estimate (difference between
    the last two levels, which overestimates the error once the rule is in
    its doubly-exponential regime).
    """
    a, b = integrand.alpha, integrand.beta
    lo, hi = integrand.interval
    span = hi - lo
    scale = span ** (1.0 + a + b)

    def partial(t, omt, jac):
        x = lo + span * t
        x = np.where(omt < 0.5, hi - span * omt, x)
        vals = t ** (a + 1.0) * omt ** (b + 1.0) * jac * integrand.h(x)
        return np.sum(vals)

    step = 1.0
    t, omt, jac = _level_nodes(step, odd_only=False)
    raw = partial(t, omt, jac)
    evals = t.size
    # mass closer to the endpoints than the outermost node
    eps = float(t.min())
    tails = (integrand.h(np.array([lo]))[0] * eps ** (a + 1) / (a + 1)
             + integrand.h(np.array([hi]))[0] * eps ** (b + 1) / (b + 1))
    prev = scale * (raw * step + tails)
    err = math.inf
    for level in range(1, max_levels + 1):
        step *= 0.5
        t, omt, jac = _level_nodes(step, odd_only=True)
        raw += partial(t, omt, jac)
        evals += t.size
        cur = scale * (raw * step + tails)
        err = abs(cur - prev)
        if level >= min_levels and err <= tol * (1.0 + abs(cur)):
            return QuadResult(float(np.real_if_close(cur)), err, level, evals)
        prev = cur
    raise QuadratureError(f"tanh-sinh did not reach tol={tol:g} (last change {err:.3e})")


def integrate_value(alpha, beta, h=_one, interval=(0.0, 1.0), tol=DEFAULT_TOL) -> float:
    return integrate(AlgebraicIntegrand(alpha, beta, h, interval), tol).value


def gauss_jacobi(integrand: AlgebraicIntegrand, n: int = 200) -> float:
    """Gauss-Jacobi cross-check; exact for polynomial ``h``."""
    a, b = integrand.alpha, integrand.beta
    lo, hi = integrand.interval
    x, w = roots_jacobi(n, b, a)
    t = 0.5 * (1.0 + x)
    span = hi - lo
    vals = integrand.h(lo + span * t)
    return float(span ** (1 + a + b) * 2.0 ** (-(1 + a + b)) * np.dot(w, vals))


def beta(x: float, y: float) -> float:
    """Euler beta function via log-gamma."""
    if x <= 0 or y <= 0:
        raise ValueError("beta needs positive arguments")
    return math.exp(math.lgamma(x) + math.lgamma(y) - math.lgamma(x + y))


def even_family_betas(k: int) -> tuple:
    """Beta values bounding ``A_1``, ``A_2``, ``A_3`` of the even family."""
    n = k + 1
    b1 = beta((k - 1) / n, (k + 2) / n)
    b2 = beta((k - 1) / n, 1 / n)
    b3 = beta(2 / n, (2 * k + 1) / n)
    return b1, b2, b3


def period_defect_bounds(k: int, a: float) -> tuple:
    """Sandwich ``lower <= k A1 + 2 a^((k-2)/(k+1)) A3 - A2 <= upper``.

    Uses ``1/a <= 1/(a-t) <= 1/(a-1)`` and ``a-1 <= a-t <= a`` on ``[0, 1]``.
    """
    if k < 2 or k % 2:
        raise ValueError("k must be an even integer >= 2")
    if not a > 1:
        raise ValueError("a must exceed 1")
    n = k + 1
    b1, b2, b3 = even_family_betas(k)
    c2 = a ** ((k - 2) / n)
    lower = k * a ** (-1 / n) * b1 + 2 * c2 * a ** (-k / n) * b3 - a ** (k / n) * b2
    upper = (k * (a - 1) ** (-1 / n) * b1 + 2 * c2 * (a - 1) ** (-k / n) * b3
             - (a - 1) ** (k / n) * b2)
    return lower, upper
