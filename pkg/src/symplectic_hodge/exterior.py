"""Exact exterior algebra over a real vector space of even dimension.

Basis covectors are ``e^1, ..., e^{2n}``; a basis k-form ``e^{i_1} ^ ... ^ e^{i_k}``
is keyed by the strictly increasing tuple ``(i_1, ..., i_k)``. Indices are
1-based throughout, matching the model-file format. Coefficients are
:class:`fractions.Fraction` and zero coefficients are never stored.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable, Iterator, Mapping, Union

MultiIndex = tuple[int, ...]
Scalar = Fraction
Number = Union[int, Fraction]


def as_scalar(value: Number | str) -> Fraction:
    """Coerce ints, Fractions and ``"p"``/``"p/q"`` strings to a Fraction.

    Floats are refused: they would silently smuggle rounding into exact code.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    # gmpy2.mpq and friends expose numerator/denominator
    num = getattr(value, "numerator", None)
    den = getattr(value, "denominator", None)
    if num is not None and den is not None and not isinstance(value, float):
        return Fraction(int(num), int(den))
    raise TypeError(f"cannot use {value!r} as an exact scalar")


def basis(n2: int, k: int) -> list[MultiIndex]:
    """All degree-k multi-indices for dimension ``n2`` in lexicographic order."""
    if k < 0 or k > n2:
        return []
    return list(combinations(range(1, n2 + 1), k))


def basis_position(n2: int, k: int) -> dict[MultiIndex, int]:
    return {idx: pos for pos, idx in enumerate(basis(n2, k))}


def dim_forms(n2: int, k: int) -> int:
    return comb(n2, k) if 0 <= k <= n2 else 0


def sort_sign(seq: Iterable[int]) -> tuple[int, MultiIndex]:
    """Sort ``seq`` and return (sign of the sorting permutation, sorted tuple).

    A repeated entry gives sign 0.
    """
    items = list(seq)
    sign = 1
    # insertion sort; sequences here have length <= 2n
    for i in range(1, len(items)):
        j = i
        while j > 0 and items[j - 1] > items[j]:
            items[j - 1], items[j] = items[j], items[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(items, items[1:]):
        if a == b:
            return 0, tuple(items)
    return sign, tuple(items)


def complement_sign(index: MultiIndex, n2: int) -> tuple[MultiIndex, int]:
    """Complement K of ``index`` and the sign s with e^I ^ e^K = s e^{1...2n}."""
    _check_index(index, n2)
    present = set(index)
    rest = tuple(i for i in range(1, n2 + 1) if i not in present)
    # sign = (-1)^(number of pairs (i in I, j in K) with i > j)
    inversions = sum(1 for i in index for j in rest if i > j)
    return rest, (-1) ** inversions


def _check_index(index: MultiIndex, n2: int) -> None:
    if any(b <= a for a, b in zip(index, index[1:])):
        raise ValueError(f"multi-index {index} is not strictly increasing")
    if index and (index[0] < 1 or index[-1] > n2):
        raise ValueError(f"multi-index {index} out of range for dimension {n2}")


class Form:
    """A (possibly inhomogeneous) exterior form with exact coefficients.

    Instances are immutable. Arithmetic returns new forms.
    """

    __slots__ = ("_dim", "_terms")

    def __init__(self, dim: int, terms: Mapping[MultiIndex, Number | str] | None = None):
        if dim < 0:
            raise ValueError("dimension must be nonnegative")
        clean: dict[MultiIndex, Fraction] = {}
        for idx, c in (terms or {}).items():
            idx = tuple(idx)
            _check_index(idx, dim)
            c = as_scalar(c)
            if c:
                clean[idx] = clean.get(idx, Fraction(0)) + c
                if not clean[idx]:
                    del clean[idx]
        self._dim = dim
        self._terms = clean

    # construction helpers

    @classmethod
    def basis_form(cls, dim: int, index: Iterable[int], coeff: Number = 1) -> "Form":
        sign, idx = sort_sign(index)
        if sign == 0:
            return cls(dim)
        return cls(dim, {idx: sign * as_scalar(coeff)})

    @classmethod
    def scalar(cls, dim: int, value: Number = 1) -> "Form":
        return cls(dim, {(): value})

    @classmethod
    def from_vector(cls, dim: int, k: int, coeffs: Iterable[Number]) -> "Form":
        """Form whose degree-k coefficients, in lexicographic basis order, are ``coeffs``."""
        return cls(dim, dict(zip(basis(dim, k), coeffs)))

    # inspection

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def terms(self) -> dict[MultiIndex, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[MultiIndex, Fraction]]:
        return iter(sorted(self._terms.items(), key=lambda kv: (len(kv[0]), kv[0])))

    def coeff(self, index: Iterable[int]) -> Fraction:
        return self._terms.get(tuple(index), Fraction(0))

    def degrees(self) -> set[int]:
        return {len(idx) for idx in self._terms}

    @property
    def degree(self) -> int | None:
        """The degree of a nonzero pure-degree form, else None."""
        degs = self.degrees()
        return degs.pop() if len(degs) == 1 else None

    def is_pure(self) -> bool:
        return len(self.degrees()) <= 1

    def is_zero(self) -> bool:
        return not self._terms

    def part(self, k: int) -> "Form":
        return Form(self._dim, {i: c for i, c in self._terms.items() if len(i) == k})

    def vector(self, k: int) -> list[Fraction]:
        """Degree-k coefficients in lexicographic basis order."""
        return [self.coeff(idx) for idx in basis(self._dim, k)]

    # arithmetic

    def _same_dim(self, other: "Form") -> None:
        if not isinstance(other, Form):
            raise TypeError(f"expected a Form, got {type(other).__name__}")
        if other._dim != self._dim:
            raise ValueError(f"dimension mismatch: {self._dim} vs {other._dim}")

    def __add__(self, other: "Form") -> "Form":
        self._same_dim(other)
        out = dict(self._terms)
        for idx, c in other._terms.items():
            out[idx] = out.get(idx, Fraction(0)) + c
        return Form(self._dim, out)

    def __neg__(self) -> "Form":
        return Form(self._dim, {i: -c for i, c in self._terms.items()})

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def __mul__(self, scalar: Number) -> "Form":
        s = as_scalar(scalar)
        return Form(self._dim, {i: s * c for i, c in self._terms.items()})

    __rmul__ = __mul__

    def __xor__(self, other: "Form") -> "Form":
        return wedge(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        return self._dim == other._dim and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self._dim, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        return f"Form({self._dim}, {self})"

    def __str__(self) -> str:
        return format_form(self)


def wedge(a: Form, b: Form) -> Form:
    a._same_dim(b)
    out: dict[MultiIndex, Fraction] = {}
    for ia, ca in a._terms.items():
        for ib, cb in b._terms.items():
            sign, idx = sort_sign(ia + ib)
            if sign:
                out[idx] = out.get(idx, Fraction(0)) + sign * ca * cb
    return Form(a.dim, out)


def wedge_power(a: Form, p: int) -> Form:
    out = Form.scalar(a.dim)
    for _ in range(p):
        out = wedge(out, a)
    return out


def contract(v_index: int, a: Form) -> Form:
    """Interior product with the basis vector e_{v_index}."""
    if not 1 <= v_index <= a.dim:
        raise ValueError(f"vector index {v_index} out of range 1..{a.dim}")
    out: dict[MultiIndex, Fraction] = {}
    for idx, c in a._terms.items():
        if v_index in idx:
            pos = idx.index(v_index)
            rest = idx[:pos] + idx[pos + 1:]
            out[rest] = out.get(rest, Fraction(0)) + (-1) ** pos * c
    return Form(a.dim, out)


def format_form(a: Form) -> str:
    """Human-readable rendering such as ``e1^e2 - 1/2 e3``. Zero renders as ``0``."""
    if a.is_zero():
        return "0"
    parts = []
    for idx, c in a.items():
        mono = "^".join(f"e{i}" for i in idx) if idx else ""
        mag = abs(c)
        if mono:
            body = mono if mag == 1 else f"{mag} {mono}"
        else:
            body = str(mag)
        parts.append(("-" if c < 0 else "+", body))
    head_sign, head = parts[0]
    text = ("-" if head_sign == "-" else "") + head
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text
