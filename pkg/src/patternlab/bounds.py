"""Avoidance bounds: the rate c_q and exact exponent-vector counts.

An avoiding set in ``(F_q^n)^k`` for an r-point full-rank pattern has size at
most ``r * N`` where ``N`` counts exponent vectors ``e in {0..q-1}^D``
(``D = k n``) with ``sum(e) <= D (r-2)(q-1) / r``.  For every ``x in (0,1)``,
``N <= objective(q, r/(r-2), x)^D``; for r = 3 the minimum over x is c_q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np

from .gf import FieldError, prime_power

GRID_POINTS = 10_000
X_TOL = 1e-10
NEAR_ONE = 1e-4
SAVING_TOL = 1e-6
INV_PHI = (math.sqrt(5) - 1) / 2


class BoundsError(ValueError):
    pass


def _check_q(q: int):
    try:
        p, _ = prime_power(q)
    except FieldError as exc:
        raise BoundsError(str(exc)) from None
    if p == 2:
        raise BoundsError("q must be odd")


def _check_m(m) -> Fraction:
    m = Fraction(m)
    if m <= 1:
        raise BoundsError(f"m must exceed 1, got {m}")
    return m


def objective(q: int, m, x: float) -> float:
    """``(1 - x^q) / (x^((q-1)/m) (1 - x))`` for ``0 < x < 1``."""
    _check_q(q)
    m = _check_m(m)
    if not 0.0 < x < 1.0:
        raise BoundsError(f"x must lie strictly inside (0, 1), got {x}")
    if 1.0 - x < NEAR_ONE:
        # geometric series avoids the 0/0 cancellation near x = 1
        numer = 0.0
        for _ in range(q):
            numer = numer * x + 1.0
    else:
        numer = (1.0 - x**q) / (1.0 - x)
    return numer / x ** ((q - 1) / float(m))


def log_objective(q: int, m, x: np.ndarray) -> np.ndarray:
    """Natural log of :func:`objective`, vectorised, overflow-free."""
    x = np.asarray(x, dtype=float)
    lx = np.log(x)
    return np.log(np.expm1(q * lx) / np.expm1(lx)) - ((q - 1) / float(m)) * lx


def golden_section(f, a: float, b: float, tol: float = X_TOL) -> float:
    """Minimiser of a unimodal f on [a, b] to within ``tol``."""
    c, d = b - INV_PHI * (b - a), a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return (a + b) / 2


class Minimum(NamedTuple):
    x_star: Optional[float]
    c_value: float
    interior: bool


def minimize_objective(q: int, m, grid: int = GRID_POINTS) -> Minimum:
    """Global minimum of the objective over (0, 1).

    Dense grid scan, then golden-section refinement around the best grid
    point.  When the best grid point is the one nearest 1 there is no
    interior minimiser and the boundary infimum ``q`` (the limit at x -> 1)
    is reported with ``x_star = None``.
    """
    _check_q(q)
    m = _check_m(m)
    xs = np.arange(1, grid + 1, dtype=float) / (grid + 1)
    vals = log_objective(q, m, xs)
    i = int(np.argmin(vals))
    if i == grid - 1:
        return Minimum(None, float(q), False)
    lo = float(xs[i - 1]) if i > 0 else float(xs[0]) / 2
    hi = float(xs[i + 1])
    x_star = golden_section(lambda x: objective(q, m, x), lo, hi)
    return Minimum(x_star, objective(q, m, x_star), True)


def exponent_threshold(q: int, D: int, r: int) -> int:
    return D * (r - 2) * (q - 1) // r


def count_exponent_vectors(q: int, D: int, threshold: int) -> int:
    """``#{e in {0..q-1}^D : sum(e) <= threshold}``, exactly.

    Coefficients of ``(1 + t + ... + t^(q-1))^D`` truncated at the threshold,
    built one factor at a time with a sliding-window sum.
    """
    top = min(threshold, D * (q - 1))
    if top < 0:
        return 0
    coeffs = [1] + [0] * top
    for _ in range(D):
        nxt, window = [0] * (top + 1), 0
        for s in range(top + 1):
            window += coeffs[s]
            if s >= q:
                window -= coeffs[s - q]
            nxt[s] = window
        coeffs = nxt
    return sum(coeffs)


def monomial_count(q: int, D: int, r: int) -> int:
    """Exponent vectors in ``{0..q-1}^D`` of total degree at most
    ``floor(D (r-2)(q-1) / r)``."""
    if q < 3 or D < 1 or r < 3:
        raise BoundsError(f"need q >= 3, D >= 1, r >= 3; got q={q}, D={D}, r={r}")
    return count_exponent_vectors(q, D, exponent_threshold(q, D, r))


@dataclass
class BoundReport:
    q: int
    k: int
    n: int
    r: int
    m: Fraction
    x_star: Optional[float]
    c_value: float
    analytic_bound: Optional[float]
    log_analytic_bound: Optional[float]
    exact_count: int
    exact_bound: int
    exponential_saving: bool

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "k": self.k,
            "n": self.n,
            "r": self.r,
            "m": str(self.m),
            "x_star": self.x_star,
            "c_value": self.c_value,
            "c_over_q": self.c_value / self.q,
            "analytic_bound": self.analytic_bound,
            "log_analytic_bound": self.log_analytic_bound,
            "exact_count": str(self.exact_count),
            "exact_bound": str(self.exact_bound),
            "exponential_saving": self.exponential_saving,
        }


def avoidance_bound(q: int, k: int, n: int, r: int = 3) -> BoundReport:
    """Size bound for sets in (F_q^n)^k avoiding any full-rank r-point pattern.

    The bound does not depend on the generators; full-rankness is the
    caller's obligation.
    """
    _check_q(q)
    if k < 1 or n < 1 or r < 3:
        raise BoundsError(f"need k, n >= 1 and r >= 3; got k={k}, n={n}, r={r}")
    D = k * n
    m = Fraction(r, r - 2)
    x_star, c_value, interior = minimize_objective(q, m)
    N = monomial_count(q, D, r)
    analytic = log_analytic = None
    if r == 3:
        log_analytic = math.log(3) + D * math.log(c_value)
        analytic = math.exp(log_analytic) if log_analytic < 700 else math.inf
    return BoundReport(
        q=q, k=k, n=n, r=r, m=m,
        x_star=x_star, c_value=c_value,
        analytic_bound=analytic, log_analytic_bound=log_analytic,
        exact_count=N, exact_bound=r * N,
        exponential_saving=bool(interior and c_value < q - SAVING_TOL),
    )
