"""Growth of symplectic primitives on model universal covers.

Each built-in cover carries a closed-form symplectic form ``omega`` and a
primitive ``eta`` with ``d eta = omega``. Sampling the pointwise norm of
``eta`` on distance spheres gives a growth profile, which is classified as
bounded (the cover is symplectic hyperbolic), at most linear, i.e.
``|eta(x)| <= c (rho(x0, x) + 1)`` (symplectic parabolic), or faster.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

COVERS = ("euclidean_plane", "euclidean_2n", "hyperbolic_plane")
DEFAULT_SAMPLES = 2**10


class GrowthError(ValueError):
    pass


@dataclass(frozen=True)
class ModelCover:
    """A chart on a model cover with closed-form ``omega``, ``eta`` and cometric.

    Callables take points of shape ``(m, dim)`` and return ``(m, dim)`` for
    covectors or ``(m, dim, dim)`` for tensors.
    """

    name: str
    dim: int
    eta: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    omega: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    cometric: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    sphere: Callable[[float, int], np.ndarray] = field(repr=False)
    chart_sample: Callable[[np.random.Generator, int], np.ndarray] = field(repr=False)
    description: str = ""

    def eta_norm(self, points: np.ndarray) -> np.ndarray:
        e = self.eta(points)
        return np.sqrt(np.einsum("ma,mab,mb->m", e, self.cometric(points), e))


def _circle(radius: float, samples: int) -> np.ndarray:
    theta = 2 * np.pi * np.arange(samples) / samples
    return np.column_stack([radius * np.cos(theta), radius * np.sin(theta)])


def _standard_omega(dim: int, m: int) -> np.ndarray:
    w = np.zeros((dim, dim))
    for i in range(0, dim, 2):
        w[i, i + 1], w[i + 1, i] = 1.0, -1.0
    return np.broadcast_to(w, (m, dim, dim)).copy()


def euclidean_cover(n: int = 1) -> ModelCover:
    """``R^{2n}`` with coordinates ``(x1, y1, ..., xn, yn)``, ``eta = sum x_i dy_i``."""
    if n < 1:
        raise GrowthError("euclidean cover needs n >= 1")
    dim = 2 * n

    def eta(p):
        out = np.zeros_like(p)
        out[:, 1::2] = p[:, 0::2]
        return out

    def sphere(radius, samples):
        if n == 1:
            return _circle(radius, samples)
        # axis points pin the exact maximiser; the rest are seeded uniform directions
        axes = np.vstack([np.eye(dim), -np.eye(dim)])
        rng = np.random.default_rng(0)
        dirs = rng.standard_normal((max(samples - len(axes), 0), dim))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        return radius * np.vstack([axes, dirs])[:samples] if samples >= len(axes) else radius * axes[:samples]

    return ModelCover(
        name="euclidean_plane" if n == 1 else "euclidean_2n",
        dim=dim,
        eta=eta,
        omega=lambda p: _standard_omega(dim, len(p)),
        cometric=lambda p: np.broadcast_to(np.eye(dim), (len(p), dim, dim)),
        sphere=sphere,
        chart_sample=lambda rng, m: rng.uniform(-10, 10, size=(m, dim)),
        description=f"flat R^{dim}, cover of T^{dim}",
    )


def hyperbolic_plane() -> ModelCover:
    """Geodesic polar coordinates ``(r, theta)``; ``eta = (cosh r - 1) dtheta``."""

    def eta(p):
        out = np.zeros_like(p)
        out[:, 1] = np.cosh(p[:, 0]) - 1
        return out

    def omega(p):
        w = np.zeros((len(p), 2, 2))
        w[:, 0, 1] = np.sinh(p[:, 0])
        w[:, 1, 0] = -w[:, 0, 1]
        return w

    def cometric(p):
        g = np.zeros((len(p), 2, 2))
        g[:, 0, 0] = 1.0
        g[:, 1, 1] = 1.0 / np.sinh(p[:, 0]) ** 2
        return g

    def sphere(radius, samples):
        theta = 2 * np.pi * np.arange(samples) / samples
        return np.column_stack([np.full(samples, radius), theta])

    return ModelCover(
        name="hyperbolic_plane",
        dim=2,
        eta=eta,
        omega=omega,
        cometric=cometric,
        sphere=sphere,
        chart_sample=lambda rng, m: np.column_stack([rng.uniform(0.1, 5.0, m), rng.uniform(0, 2 * np.pi, m)]),
        description="curvature -1 plane, cover of a closed hyperbolic surface",
    )


def get_cover(name: str, n: int = 2) -> ModelCover:
    if name == "euclidean_plane":
        return euclidean_cover(1)
    if name == "euclidean_2n":
        return euclidean_cover(n)
    if name == "hyperbolic_plane":
        return hyperbolic_plane()
    raise GrowthError(f"unknown cover {name!r}; choose from {', '.join(COVERS)}")


def exterior_derivative_fd(cover: ModelCover, points: np.ndarray, h: float = 1e-3) -> np.ndarray:
    """``(d eta)_{ab} = d_a eta_b - d_b eta_a`` by a 5-point central stencil."""
    m, dim = points.shape
    jac = np.zeros((m, dim, dim))  # jac[:, a, b] = d_a eta_b
    for a in range(dim):
        step = np.zeros(dim)
        step[a] = h
        jac[:, a, :] = (
            -cover.eta(points + 2 * step) + 8 * cover.eta(points + step)
            - 8 * cover.eta(points - step) + cover.eta(points - 2 * step)
        ) / (12 * h)
    return jac - np.transpose(jac, (0, 2, 1))


def primitive_error(cover: ModelCover, samples: int = 1000, seed: int = 0) -> float:
    """Largest relative error ``|d eta - omega| / |omega|`` over random chart points."""
    pts = cover.chart_sample(np.random.default_rng(seed), samples)
    fd = exterior_derivative_fd(cover, pts)
    exact = cover.omega(pts)
    err = np.linalg.norm(fd - exact, axis=(1, 2)) / np.linalg.norm(exact, axis=(1, 2))
    return float(err.max())


@dataclass(frozen=True)
class GrowthProfile:
    cover: str
    radii: np.ndarray
    sup_norm: np.ndarray

    def __post_init__(self):
        if len(self.radii) != len(self.sup_norm):
            raise GrowthError("radii and suprema differ in length")
        if np.any(np.diff(self.radii) <= 0):
            raise GrowthError("radii must be strictly increasing")

    def as_dict(self) -> dict:
        return {
            "cover": self.cover,
            "radii": [float(r) for r in self.radii],
            "sup_norm": [float(s) for s in self.sup_norm],
        }


def primitive_norm_profile(cover: ModelCover, radii, samples: int = DEFAULT_SAMPLES) -> GrowthProfile:
    radii = np.asarray(radii, dtype=float)
    if radii.ndim != 1 or len(radii) == 0 or np.any(radii <= 0):
        raise GrowthError("radii must be a nonempty list of positive numbers")
    if np.any(np.diff(radii) <= 0):
        raise GrowthError("radii must be strictly increasing")
    sup = np.array([cover.eta_norm(cover.sphere(r, samples)).max() for r in radii])
    return GrowthProfile(cover.name, radii, sup)


@dataclass(frozen=True)
class GrowthClass:
    kind: str  # "bounded" | "sublinear" | "superlinear"
    c: float
    details: dict = field(default_factory=dict)


def _mid_index(radii: np.ndarray) -> int:
    return int(np.argmin(np.abs(radii - radii[-1] / 2)))


def classify_growth(profile: GrowthProfile, tol: float = 1e-3, ratio_tol: float = 0.1) -> GrowthClass:
    """Bounded, sublinear (at most linear, as in ``c (rho + 1)``) or superlinear.

    ``tol`` bounds the late increase ``s(R_max) - s(R_mid)`` of a bounded
    profile; ``ratio_tol`` bounds the late relative drift of
    ``s(R) / (R + 1)`` for the at-most-linear class. ``R_mid`` is the sampled
    radius nearest ``R_max / 2``.
    """
    r, s = profile.radii, profile.sup_norm
    if len(r) < 4:
        raise GrowthError(f"need at least 4 radii to classify growth, got {len(r)}")
    mid = _mid_index(r)
    late_rise = float(s[-1] - s[mid])
    ratios = s / (r + 1)
    drift = float(ratios[-1] / ratios[mid] - 1) if ratios[mid] > 0 else (0.0 if ratios[-1] == 0 else np.inf)
    details = {"late_rise": late_rise, "ratio_drift": drift, "r_mid": float(r[mid]), "r_max": float(r[-1])}
    if late_rise < tol:
        return GrowthClass("bounded", float(s.max()), details)
    if drift <= ratio_tol:
        return GrowthClass("sublinear", float(ratios.max()), details)
    return GrowthClass("superlinear", float(ratios.max()), details)


@dataclass(frozen=True)
class ParabolicityVerdict:
    cover: str
    verdict: str
    growth: GrowthClass
    profile: GrowthProfile
    notes: tuple[str, ...] = ()

    def as_dict(self) -> dict:
        return {
            "cover": self.cover,
            "verdict": self.verdict,
            "growth": self.growth.kind,
            "c": self.growth.c,
            "details": self.growth.details,
            "notes": list(self.notes),
            "profile": self.profile.as_dict(),
        }


def default_radii(rmax: float, count: int = 64) -> np.ndarray:
    return np.linspace(rmax / count, rmax, count)


def parabolicity_verdict(
    cover: ModelCover,
    radii=None,
    samples: int = DEFAULT_SAMPLES,
    tol: float = 1e-3,
    ratio_tol: float = 0.1,
) -> ParabolicityVerdict:
    radii = default_radii(100.0) if radii is None else radii
    profile = primitive_norm_profile(cover, radii, samples)
    growth = classify_growth(profile, tol, ratio_tol)
    if growth.kind == "bounded":
        verdict = "symplectic hyperbolic"
        notes = ("bounded primitives are in particular at most linear, so the cover is also symplectic parabolic",)
    elif growth.kind == "sublinear":
        verdict, notes = "symplectic parabolic", ()
    else:
        verdict = "neither"
        notes = ("only the built-in primitive was tested; another primitive might grow slower",)
    return ParabolicityVerdict(cover.name, verdict, growth, profile, notes)
