"""Exact rational matrices and graded operators on the invariant complex.

Matrices are :class:`sympy.polys.matrices.DomainMatrix` over ``QQ``; the
column convention is used throughout, so a degree-k operator taking
``Omega^k`` to ``Omega^l`` is a ``C(2n, l) x C(2n, k)`` matrix acting on
coefficient vectors in lexicographic basis order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .exterior import Form, as_scalar, basis, dim_forms

Matrix = DomainMatrix


def qq(value) -> object:
    f = as_scalar(value)
    return QQ(f.numerator, f.denominator)


def to_fraction(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


def zeros(rows: int, cols: int) -> Matrix:
    return DomainMatrix.zeros((rows, cols), QQ).to_dense()


def eye(n: int) -> Matrix:
    return DomainMatrix.eye(n, QQ).to_dense()


def from_rows(rows: Sequence[Sequence], ncols: int | None = None) -> Matrix:
    rows = [[qq(x) for x in r] for r in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    return DomainMatrix(rows, (len(rows), ncols), QQ)


def from_columns(cols: Sequence[Sequence], nrows: int) -> Matrix:
    return from_rows(cols, nrows).transpose() if cols else zeros(nrows, 0)


def entries(m: Matrix) -> list[list[Fraction]]:
    return [[to_fraction(x) for x in row] for row in m.to_list()]


def column(m: Matrix, j: int) -> list[Fraction]:
    return [to_fraction(row[j]) for row in m.to_list()]


def columns(m: Matrix) -> list[list[Fraction]]:
    rows = entries(m)
    return [[r[j] for r in rows] for j in range(m.shape[1])]


def is_zero(m: Matrix) -> bool:
    return m.shape[0] == 0 or m.shape[1] == 0 or m.is_zero_matrix


def same(a: Matrix, b: Matrix) -> bool:
    """Entrywise equality, independent of sparse or dense storage."""
    return a.shape == b.shape and a.to_dense() == b.to_dense()


def rank(m: Matrix) -> int:
    if m.shape[0] == 0 or m.shape[1] == 0:
        return 0
    return m.rank()


def hstack(*ms: Matrix) -> Matrix:
    ms = [m for m in ms if m.shape[1] > 0] or ms[:1]
    out = ms[0]
    for m in ms[1:]:
        out = out.hstack(m)
    return out


def vstack(*ms: Matrix) -> Matrix:
    ms = [m for m in ms if m.shape[0] > 0] or ms[:1]
    out = ms[0]
    for m in ms[1:]:
        out = out.vstack(m)
    return out


def _rref(m: Matrix) -> tuple[list[list], tuple[int, ...]]:
    if m.shape[0] == 0 or m.shape[1] == 0:
        return [], ()
    r, pivots = m.rref()
    return r.to_list(), tuple(pivots)


def kernel(m: Matrix) -> Matrix:
    """Basis of the null space as columns, in reduced echelon normal form.

    One basis vector per free column, in increasing column order; this is
    the deterministic choice used for witnesses.
    """
    ncols = m.shape[1]
    rows, pivots = _rref(m)
    free = [j for j in range(ncols) if j not in pivots]
    vecs = []
    for f in free:
        v = [QQ(0)] * ncols
        v[f] = QQ(1)
        for r, p in enumerate(pivots):
            v[p] = -rows[r][f]
        vecs.append(v)
    if not vecs:
        return zeros(ncols, 0)
    return DomainMatrix(vecs, (len(vecs), ncols), QQ).transpose()


def image(m: Matrix) -> Matrix:
    """Basis of the column space: the pivot columns of ``m``."""
    _, pivots = _rref(m)
    if not pivots:
        return zeros(m.shape[0], 0)
    rows = m.to_list()
    cols = [[row[j] for row in rows] for j in pivots]
    return DomainMatrix(cols, (len(cols), m.shape[0]), QQ).transpose()


def nullity(m: Matrix) -> int:
    return m.shape[1] - rank(m)


def solve_in_span(span: Matrix, target: Matrix) -> bool:
    """True iff every column of ``target`` lies in the column span of ``span``."""
    if target.shape[1] == 0:
        return True
    return rank(hstack(span, target)) == rank(span)


def inverse(m: Matrix) -> Matrix:
    if m.shape == (0, 0):
        return m
    return m.inv()


def minor_det(m: list[list[Fraction]], rows: Sequence[int], cols: Sequence[int]) -> Fraction:
    """Determinant of a square submatrix of a Fraction matrix (0-based indices)."""
    k = len(rows)
    if k == 0:
        return Fraction(1)
    a = [[m[r][c] for c in cols] for r in rows]
    det = Fraction(1)
    for i in range(k):
        piv = next((r for r in range(i, k) if a[r][i] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != i:
            a[i], a[piv] = a[piv], a[i]
            det = -det
        det *= a[i][i]
        for r in range(i + 1, k):
            if a[r][i]:
                f = a[r][i] / a[i][i]
                for c in range(i, k):
                    a[r][c] -= f * a[i][c]
    return det


def exterior_power(m: list[list[Fraction]], k: int) -> Matrix:
    """Induced matrix on k-forms: entry [I, J] is the minor det(m[I, J])."""
    n2 = len(m)
    idx = basis(n2, k)
    rows = [[minor_det(m, [i - 1 for i in I], [j - 1 for j in J]) for J in idx] for I in idx]
    return from_rows(rows, len(idx))


@dataclass(frozen=True)
class GradedOperator:
    """A linear map on the invariant complex shifting degree by ``shift``.

    ``mats[k]`` is the matrix of the map restricted to ``Omega^k``; degrees
    whose target falls outside ``0..dim`` carry an empty ``0 x C(dim, k)``
    matrix so composition never needs special cases.
    """

    dim: int
    shift: int
    mats: dict[int, Matrix] = field(repr=False)
    name: str = ""

    def __post_init__(self):
        for k in range(self.dim + 1):
            m = self.mats.get(k)
            want = (dim_forms(self.dim, k + self.shift), dim_forms(self.dim, k))
            if m is None:
                self.mats[k] = zeros(*want)
            elif m.shape != want:
                raise ValueError(
                    f"{self.name or 'operator'}: degree {k} matrix has shape {m.shape}, expected {want}"
                )
            else:
                self.mats[k] = m.to_dense()

    @classmethod
    def build(cls, dim: int, shift: int, per_degree: Callable[[int], Matrix], name: str = "") -> "GradedOperator":
        return cls(dim, shift, {k: per_degree(k) for k in range(dim + 1)}, name)

    @classmethod
    def identity(cls, dim: int, name: str = "id") -> "GradedOperator":
        return cls.build(dim, 0, lambda k: eye(dim_forms(dim, k)), name)

    @classmethod
    def zero(cls, dim: int, shift: int, name: str = "0") -> "GradedOperator":
        return cls(dim, shift, {}, name)

    def __getitem__(self, k: int) -> Matrix:
        if 0 <= k <= self.dim:
            return self.mats[k]
        # outside the complex: an empty map from the zero space
        return zeros(dim_forms(self.dim, k + self.shift), 0)

    def degrees(self) -> range:
        return range(self.dim + 1)

    def _check(self, other: "GradedOperator") -> None:
        if not isinstance(other, GradedOperator) or other.dim != self.dim:
            raise ValueError("graded operators on different complexes")

    def __matmul__(self, other: "GradedOperator") -> "GradedOperator":
        self._check(other)
        return GradedOperator.build(
            self.dim,
            self.shift + other.shift,
            lambda k: self[k + other.shift] * other[k],
            f"{self.name}{other.name}",
        )

    def __add__(self, other: "GradedOperator") -> "GradedOperator":
        self._check(other)
        if other.shift != self.shift:
            raise ValueError(f"cannot add operators of shifts {self.shift} and {other.shift}")
        return GradedOperator.build(self.dim, self.shift, lambda k: self[k] + other[k], f"({self.name}+{other.name})")

    def __neg__(self) -> "GradedOperator":
        return self.scaled(-1)

    def __sub__(self, other: "GradedOperator") -> "GradedOperator":
        return self + (-other)

    def scaled(self, c) -> "GradedOperator":
        s = qq(c)
        return GradedOperator.build(self.dim, self.shift, lambda k: self[k] * s, self.name)

    def signed(self, sign: Callable[[int], int]) -> "GradedOperator":
        """Multiply the degree-k block by ``sign(k)`` (k is the source degree)."""
        return GradedOperator.build(self.dim, self.shift, lambda k: self[k] * QQ(sign(k)), self.name)

    def named(self, name: str) -> "GradedOperator":
        return GradedOperator(self.dim, self.shift, dict(self.mats), name)

    def equals(self, other: "GradedOperator") -> bool:
        self._check(other)
        return other.shift == self.shift and all(same(self[k], other[k]) for k in self.degrees())

    def is_zero(self) -> bool:
        return all(is_zero(self[k]) for k in self.degrees())

    def mismatched_degrees(self, other: "GradedOperator") -> list[int]:
        return [k for k in self.degrees() if not same(self[k], other[k])]

    def apply(self, form: Form) -> Form:
        if form.dim != self.dim:
            raise ValueError("form and operator live on different complexes")
        out = Form(self.dim)
        for k in sorted(form.degrees()):
            vec = from_columns([form.vector(k)], dim_forms(self.dim, k))
            img = self[k] * vec
            out = out + Form.from_vector(self.dim, k + self.shift, column(img, 0))
        return out


def forms_from_columns(m: Matrix, dim: int, k: int) -> list[Form]:
    return [Form.from_vector(dim, k, col) for col in columns(m)]


def columns_from_forms(forms: Iterable[Form], dim: int, k: int) -> Matrix:
    return from_columns([f.vector(k) for f in forms], dim_forms(dim, k))
