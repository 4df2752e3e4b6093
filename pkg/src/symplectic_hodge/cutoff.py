"""The Gaffney cutoff family on the half line.

``f(x) = exp(-1/x)`` for ``x > 0`` (else 0), ``psi(x) = f(x) / (f(x) + f(1 - x))``
and ``a_eps(x) = psi(2 - eps x)^2``. Then ``a_eps = 1`` on ``[0, 1/eps]``,
``a_eps = 0`` on ``[2/eps, inf)``, ``-eps C1 sqrt(a_eps) <= a_eps' <= 0`` and
``|a_eps''| <= C2 eps^2`` with constants independent of eps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

MIN_GRID = 1000


class CutoffError(ValueError):
    pass


def f(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(-1.0 / x[pos])
    return out


def psi(x):
    """``psi`` and its first two derivatives, exactly 0 for x <= 0 and 1 for x >= 1."""
    x = np.asarray(x, dtype=float)
    p, dp, ddp = np.zeros_like(x), np.zeros_like(x), np.zeros_like(x)
    p[x >= 1] = 1.0
    mid = (x > 0) & (x < 1)
    t = x[mid]
    # f(t) / (f(t) + f(1-t)) = 1 / (1 + exp(1/t - 1/(1-t)))
    u = 1.0 / t - 1.0 / (1.0 - t)
    pm = expit(-u)
    qm = expit(u)  # 1 - psi without cancellation
    q = 1.0 / t**2 + 1.0 / (1.0 - t) ** 2  # -u'
    dq = -2.0 / t**3 + 2.0 / (1.0 - t) ** 3
    d1 = pm * qm * q
    p[mid] = pm
    dp[mid] = d1
    ddp[mid] = d1 * (qm - pm) * q + pm * qm * dq
    return p, dp, ddp


@dataclass(frozen=True)
class CutoffFamily:
    eps: float

    def __post_init__(self):
        if not self.eps > 0:
            raise CutoffError(f"epsilon must be positive, got {self.eps}")

    def evaluate(self, x):
        """``(a, a', a'')`` at ``x`` from the closed-form derivative formulas."""
        x = np.asarray(x, dtype=float)
        if np.any(x < 0):
            raise CutoffError("the cutoff family lives on x >= 0")
        e = self.eps
        p, dp, ddp = psi(2.0 - e * x)
        a = p**2
        a1 = -2.0 * e * p * dp
        a2 = 2.0 * e**2 * dp**2 + 2.0 * e**2 * p * ddp
        return a, a1, a2

    def grid(self, points: int) -> np.ndarray:
        return np.linspace(0.0, 2.0 / self.eps + 1.0, points)


def evaluate(eps: float, x):
    return CutoffFamily(eps).evaluate(x)


@dataclass(frozen=True)
class Certificate:
    eps: float
    points: int
    C1: float
    C2: float
    monotone: bool
    range_ok: bool
    plateaus_ok: bool

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.C1) and np.isfinite(self.C2) and self.monotone and self.range_ok and self.plateaus_ok)

    def as_dict(self) -> dict:
        return {
            "epsilon": self.eps,
            "grid": self.points,
            "C1": self.C1,
            "C2": self.C2,
            "derivative_nonpositive": self.monotone,
            "values_in_unit_interval": self.range_ok,
            "plateaus_exact": self.plateaus_ok,
            "pass": self.passed,
        }


def certify_bounds(eps: float, grid: int = 10_000) -> Certificate:
    """Smallest constants ``C1``, ``C2`` valid on a uniform grid over ``[0, 2/eps + 1]``."""
    if grid < MIN_GRID:
        raise CutoffError(f"grid too coarse: need at least {MIN_GRID} points, got {grid}")
    fam = CutoffFamily(eps)
    x = fam.grid(grid)
    a, a1, a2 = fam.evaluate(x)
    inside = a > 0
    c1 = float(np.max(-a1[inside] / (eps * np.sqrt(a[inside])))) if inside.any() else 0.0
    c2 = float(np.max(np.abs(a2)) / eps**2)
    one = x <= 1.0 / eps
    zero = x >= 2.0 / eps
    plateaus = bool(
        np.all(a[one] == 1.0) and np.all(a[zero] == 0.0)
        and np.all(a1[one | zero] == 0.0) and np.all(a2[one | zero] == 0.0)
    )
    return Certificate(
        eps=eps,
        points=grid,
        C1=c1,
        C2=c2,
        monotone=bool(np.all(a1 <= 0)),
        range_ok=bool(np.all((a >= 0) & (a <= 1))),
        plateaus_ok=plateaus,
    )


def derivative_mismatch(eps: float, grid: int = 10_000, margin: float = 0.01) -> tuple[float, float]:
    """Relative sup-norm error of closed-form ``a'``, ``a''`` against central differences.

    Points within ``margin / eps`` of the plateau edges are skipped.
    """
    fam = CutoffFamily(eps)
    x = fam.grid(grid)
    lo, hi = 1.0 / eps, 2.0 / eps
    keep = (np.abs(x - lo) > margin / eps) & (np.abs(x - hi) > margin / eps) & (x > 0)
    x = x[keep]
    h = 1e-3 / eps
    # five-point stencils, on the far side of 0 use the exact plateau value
    xs = [np.maximum(x + j * h, 0.0) for j in (-2, -1, 0, 1, 2)]
    vals = [fam.evaluate(v)[0] for v in xs]
    fd1 = (vals[0] - 8 * vals[1] + 8 * vals[3] - vals[4]) / (12 * h)
    fd2 = (-vals[0] + 16 * vals[1] - 30 * vals[2] + 16 * vals[3] - vals[4]) / (12 * h * h)
    _, a1, a2 = fam.evaluate(x)
    e1 = float(np.max(np.abs(fd1 - a1)) / np.max(np.abs(a1)))
    e2 = float(np.max(np.abs(fd2 - a2)) / np.max(np.abs(a2)))
    return e1, e2
