"""Symplectic forms, rational Darboux bases and the compatible almost Kahler triple.

Vectors ``e_1..e_2n`` are dual to the model's covectors ``e^1..e^2n``.
A Darboux basis is stored as the matrix ``P`` whose a-th column holds the
e-coordinates of the Darboux vector ``f_a``; then ``e^i = sum_a P[i][a] f^a``.
The triple is canonical in the Darboux basis: ``g`` is the identity Gram
matrix and ``J f_{2i-1} = f_{2i}``, ``J f_{2i} = -f_{2i-1}``, so that
``g(u, v) = omega(u, J v)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Sequence

from .exterior import Form, basis, wedge_power
from .lie_model import LieModel, StructureTerm
from .linalg import (
    GradedOperator,
    Matrix,
    columns,
    entries,
    exterior_power,
    from_rows,
    inverse,
    minor_det,
)

FracMatrix = list[list[Fraction]]


class DegenerateFormError(ValueError):
    """Raised when a 2-form is not symplectic where one is required."""


def _matmul(a: FracMatrix, b: FracMatrix) -> FracMatrix:
    return [[sum((a[i][t] * b[t][j] for t in range(len(b))), Fraction(0)) for j in range(len(b[0]))] for i in range(len(a))]


def _transpose(a: FracMatrix) -> FracMatrix:
    return [list(r) for r in zip(*a)]


def _identity(n: int) -> FracMatrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def _inverse(a: FracMatrix) -> FracMatrix:
    return entries(inverse(from_rows(a)))


def standard_omega(dim: int) -> Form:
    return Form(dim, {(2 * i - 1, 2 * i): 1 for i in range(1, dim // 2 + 1)})


def standard_j(dim: int) -> FracMatrix:
    j = [[Fraction(0)] * dim for _ in range(dim)]
    for i in range(0, dim, 2):
        j[i + 1][i] = Fraction(1)   # J f_{2i-1} = f_{2i}
        j[i][i + 1] = Fraction(-1)  # J f_{2i} = -f_{2i-1}
    return j


@dataclass(frozen=True)
class SymplecticStructure:
    omega: Form

    def __post_init__(self):
        if self.omega.degrees() - {2}:
            raise ValueError("omega must be a pure 2-form")
        if self.omega.dim % 2:
            raise ValueError("symplectic forms live in even dimension")

    @property
    def dim(self) -> int:
        return self.omega.dim

    @property
    def n(self) -> int:
        return self.omega.dim // 2

    @property
    def matrix(self) -> FracMatrix:
        """Skew matrix ``W[i][j] = omega(e_i, e_j)`` (0-based)."""
        w = [[Fraction(0)] * self.dim for _ in range(self.dim)]
        for (i, j), c in self.omega.items():
            w[i - 1][j - 1] += c
            w[j - 1][i - 1] -= c
        return w

    def pairing(self, u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
        w = self.matrix
        return sum((u[i] * w[i][j] * v[j] for i in range(self.dim) for j in range(self.dim)), Fraction(0))

    def top_power(self) -> Form:
        return wedge_power(self.omega, self.n)

    def volume(self) -> Form:
        """``omega^n / n!``, the orientation and volume used by both stars."""
        return self.top_power() * Fraction(1, factorial(self.n))

    def is_nondegenerate(self) -> bool:
        return not self.top_power().is_zero()

    def inverse_matrix(self) -> FracMatrix:
        """Components ``(omega^{-1})^{ij}``: the matrix inverse of ``W``."""
        if not self.is_nondegenerate():
            raise DegenerateFormError("omega is degenerate")
        return _inverse(self.matrix)


@dataclass
class SymplecticVerdict:
    closed: bool
    nondegenerate: bool
    d_omega: Form
    top_power: Form
    volume: Form

    @property
    def ok(self) -> bool:
        return self.closed and self.nondegenerate

    @property
    def messages(self) -> list[str]:
        msgs = []
        if not self.closed:
            msgs.append(f"omega is not closed: d omega = {self.d_omega}")
        if not self.nondegenerate:
            msgs.append("omega is degenerate: omega^n = 0")
        return msgs


def validate_symplectic(model: LieModel, omega: SymplecticStructure | Form) -> SymplecticVerdict:
    if isinstance(omega, Form):
        omega = SymplecticStructure(omega)
    if omega.dim != model.dim:
        raise ValueError("omega and model dimensions differ")
    d_omega = model.d_form(omega.omega)
    top = omega.top_power()
    return SymplecticVerdict(
        closed=d_omega.is_zero(),
        nondegenerate=not top.is_zero(),
        d_omega=d_omega,
        top_power=top,
        volume=omega.volume(),
    )


@dataclass(frozen=True)
class CompatibleTriple:
    """Darboux basis plus the canonical ``(g, J, omega)`` expressed in e-coordinates."""

    structure: SymplecticStructure
    P: FracMatrix = field(repr=False)
    g: FracMatrix = field(repr=False)
    J: FracMatrix = field(repr=False)
    omega_darboux: FracMatrix = field(repr=False)

    @property
    def dim(self) -> int:
        return self.structure.dim

    @property
    def omega(self) -> Form:
        return self.structure.omega

    @property
    def cometric(self) -> FracMatrix:
        """Inner product on covectors, ``g^{-1} = P P^T``."""
        return _matmul(self.P, _transpose(self.P))

    def metric(self, u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
        return sum((u[i] * self.g[i][j] * v[j] for i in range(self.dim) for j in range(self.dim)), Fraction(0))

    def apply_j(self, v: Sequence[Fraction]) -> list[Fraction]:
        return [sum((self.J[i][j] * v[j] for j in range(self.dim)), Fraction(0)) for i in range(self.dim)]

    def check(self) -> dict[str, bool]:
        """Exact checks of every invariant of the triple."""
        n2 = self.dim
        w = self.structure.matrix
        std = SymplecticStructure(standard_omega(n2)).matrix
        jj = _matmul(self.J, self.J)
        minus_id = [[-x for x in row] for row in _identity(n2)]
        return {
            "darboux": _matmul(_matmul(_transpose(self.P), w), self.P) == std,
            "j_squared": jj == minus_id,
            "g_symmetric": self.g == _transpose(self.g),
            "g_positive": _positive_definite(self.g),
            "compatible": self.g == _matmul(w, self.J),
            "omega_j_invariant": _matmul(_matmul(_transpose(self.J), w), self.J) == w,
        }


def _positive_definite(a: FracMatrix) -> bool:
    # Sylvester's criterion on leading principal minors
    return all(minor_det(a, range(k), range(k)) > 0 for k in range(1, len(a) + 1))


def darboux_basis(omega: SymplecticStructure | Form, order: Sequence[int] | None = None) -> CompatibleTriple:
    """Rational symplectic basis by skew Gram-Schmidt.

    ``order`` permutes the starting vectors (1-based indices); by default the
    natural order is used. At each step the lexicographically first pair of
    remaining vectors with nonzero pairing is taken as the next Darboux pair.
    """
    if isinstance(omega, Form):
        omega = SymplecticStructure(omega)
    n2 = omega.dim
    if not omega.is_nondegenerate():
        raise DegenerateFormError("omega is degenerate; no Darboux basis exists")
    order = list(order) if order is not None else list(range(1, n2 + 1))
    if sorted(order) != list(range(1, n2 + 1)):
        raise ValueError(f"order must be a permutation of 1..{n2}")

    pool = [[Fraction(int(i == o - 1)) for i in range(n2)] for o in order]
    frame: list[list[Fraction]] = []
    while pool:
        pair = next(
            ((a, b) for a in range(len(pool)) for b in range(a + 1, len(pool)) if omega.pairing(pool[a], pool[b])),
            None,
        )
        if pair is None:  # pragma: no cover - impossible for nondegenerate omega
            raise DegenerateFormError("skew Gram-Schmidt stalled")
        a, b = pair
        f = pool[a]
        c = omega.pairing(pool[a], pool[b])
        h = [x / c for x in pool[b]]
        rest = [u for t, u in enumerate(pool) if t not in (a, b)]
        pool = []
        for u in rest:
            uh, uf = omega.pairing(u, h), omega.pairing(u, f)
            pool.append([u[i] - uh * f[i] + uf * h[i] for i in range(n2)])
        frame += [f, h]

    p = _transpose(frame)
    p_inv = _inverse(p)
    j = _matmul(_matmul(p, standard_j(n2)), p_inv)
    g = _matmul(_transpose(p_inv), p_inv)
    omega_std = _matmul(_matmul(_transpose(p), omega.matrix), p)
    return CompatibleTriple(structure=omega, P=p, g=g, J=j, omega_darboux=omega_std)


def coordinate_change(P: FracMatrix, k: int) -> Matrix:
    """Matrix taking e-coefficients of a k-form to its f-coefficients: ``(Lambda^k P)^T``."""
    return exterior_power(P, k).transpose()


def push_forward(op: GradedOperator, P: FracMatrix) -> GradedOperator:
    """Express ``op`` in the basis ``f`` defined by ``P`` (conjugation by ``Lambda^k P``)."""
    n2 = op.dim
    if len(P) != n2 or any(len(r) != n2 for r in P):
        raise ValueError(f"basis change must be {n2}x{n2}")
    t = {k: coordinate_change(P, k) for k in range(n2 + 1)}
    t_inv = {k: inverse(m) for k, m in t.items()}

    def block(k: int) -> Matrix:
        tgt = k + op.shift
        if not 0 <= tgt <= n2:
            return op[k]
        return t[tgt] * op[k] * t_inv[k]

    return GradedOperator.build(n2, op.shift, block, op.name)


def transform_form(form: Form, P: FracMatrix) -> Form:
    out = Form(form.dim)
    for k in sorted(form.degrees()):
        vec = from_rows([[c] for c in form.vector(k)])
        out = out + Form.from_vector(form.dim, k, columns(coordinate_change(P, k) * vec)[0])
    return out


def change_basis(model: LieModel, P: FracMatrix, name: str | None = None) -> LieModel:
    """The same Lie algebra written in the coframe ``f`` defined by ``P``."""
    d1 = push_forward(model.d, P)[1]
    cols = columns(d1)
    n2 = model.dim
    pairs = basis(n2, 2)
    terms = tuple(
        StructureTerm(k=k + 1, i=pairs[r][0], j=pairs[r][1], c=c)
        for k, col in enumerate(cols)
        for r, c in enumerate(col)
        if c
    )
    omega = transform_form(model.omega, P) if model.omega is not None else None
    return LieModel(name=name or model.name, dim=n2, structure=terms, omega=omega, comment=model.comment)


def darboux_model(model: LieModel) -> tuple[LieModel, CompatibleTriple]:
    """Rewrite ``model`` in its canonical Darboux coframe."""
    if model.omega is None:
        raise ValueError(f"model {model.name!r} carries no symplectic form")
    triple = darboux_basis(model.omega)
    return change_basis(model, triple.P), triple
