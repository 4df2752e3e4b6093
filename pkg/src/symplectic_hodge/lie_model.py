"""Finite models: unimodular Lie algebras with an invariant exterior derivative.

A model fixes ``d`` on the degree-1 generators by listing, for each
``de^k``, its coefficients on the basis 2-forms ``e^i ^ e^j`` (i < j).
``d`` is extended to all degrees as an antiderivation.

Model files are UTF-8 JSON objects::

    {
      "name": "kodaira-thurston",
      "dim": 4,
      "structure": [{"i": 1, "j": 2, "k": 4, "c": "1"}],
      "omega": [{"i": 1, "j": 3, "c": "1"}, {"i": 2, "j": 4, "c": "1"}],
      "comment": "optional free text"
    }

``c`` is a rational given as ``"p"`` or ``"p/q"`` (plain integers are also
accepted). Unknown keys are rejected.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import comb
from pathlib import Path

from .exterior import Form, basis, wedge
from .linalg import GradedOperator, Matrix, from_columns, is_zero, rank

MODEL_KEYS = {"name", "dim", "structure", "omega", "comment"}
REQUIRED_KEYS = {"name", "dim", "structure"}


class ModelError(ValueError):
    """Raised when a model file cannot be parsed or fails validation."""


@dataclass(frozen=True)
class StructureTerm:
    """``de^k`` contains ``c * e^i ^ e^j``."""

    k: int
    i: int
    j: int
    c: Fraction


@dataclass(frozen=True)
class LieModel:
    name: str
    dim: int
    structure: tuple[StructureTerm, ...] = ()
    omega: Form | None = field(default=None, compare=False)
    comment: str = ""

    def __post_init__(self):
        if self.dim < 2 or self.dim % 2:
            raise ModelError(f"dimension must be even and >= 2, got {self.dim}")
        for t in self.structure:
            if not (1 <= t.i < t.j <= self.dim):
                raise ModelError(f"structure term needs 1 <= i < j <= {self.dim}, got i={t.i}, j={t.j}")
            if not 1 <= t.k <= self.dim:
                raise ModelError(f"structure term index k={t.k} out of range 1..{self.dim}")
        if self.omega is not None and self.omega.dim != self.dim:
            raise ModelError("omega lives in the wrong dimension")

    @property
    def n(self) -> int:
        return self.dim // 2

    def d_generator(self, k: int) -> Form:
        """The 2-form ``de^k``."""
        terms: dict[tuple[int, int], Fraction] = {}
        for t in self.structure:
            if t.k == k:
                terms[(t.i, t.j)] = terms.get((t.i, t.j), Fraction(0)) + t.c
        return Form(self.dim, terms)

    def d_form(self, a: Form) -> Form:
        """Exterior derivative of an arbitrary form (antiderivation extension)."""
        out = Form(self.dim)
        for idx, c in a.items():
            for pos, gen in enumerate(idx):
                left = Form.basis_form(self.dim, idx[:pos])
                right = Form.basis_form(self.dim, idx[pos + 1:])
                term = wedge(wedge(left, self.d_generator(gen)), right)
                out = out + term * ((-1) ** pos * c)
        return out

    @cached_property
    def d(self) -> GradedOperator:
        return GradedOperator.build(self.dim, 1, self._d_block, "d")

    def _d_block(self, k: int) -> Matrix:
        cols = [self.d_form(Form.basis_form(self.dim, idx)).vector(k + 1) for idx in basis(self.dim, k)]
        return from_columns(cols, comb(self.dim, k + 1) if k < self.dim else 0)

    def is_abelian(self) -> bool:
        return all(t.c == 0 for t in self.structure)


def d_matrix(model: LieModel, k: int) -> Matrix:
    """Matrix of ``d: Omega^k -> Omega^{k+1}``; empty for ``k = dim``."""
    return model.d[k]


@dataclass
class ValidationReport:
    model: str
    dim: int
    dims: list[int]
    d_squared_zero: dict[int, bool]
    unimodular: bool
    messages: list[str]

    @property
    def ok(self) -> bool:
        return all(self.d_squared_zero.values()) and self.unimodular

    def as_dict(self) -> dict:
        return {
            "model": self.model,
            "dim": self.dim,
            "dims": self.dims,
            "d_squared_zero": {str(k): v for k, v in sorted(self.d_squared_zero.items())},
            "unimodular": self.unimodular,
            "ok": self.ok,
            "messages": self.messages,
        }


def validate(model: LieModel) -> ValidationReport:
    d = model.d
    dd = {k: is_zero(d[k + 1] * d[k]) for k in range(model.dim - 1)}
    msgs = [f"d^2 != 0 on Omega^{k}" for k, ok in dd.items() if not ok]
    unimodular = is_zero(d[model.dim - 1])
    if not unimodular:
        msgs.append(
            f"not unimodular: d has rank {rank(d[model.dim - 1])} on Omega^{model.dim - 1}"
        )
    return ValidationReport(
        model=model.name,
        dim=model.dim,
        dims=[comb(model.dim, k) for k in range(model.dim + 1)],
        d_squared_zero=dd,
        unimodular=unimodular,
        messages=msgs,
    )


def _int_field(rec: dict, key: str, where: str) -> int:
    if key not in rec:
        raise ModelError(f"{where}: missing key {key!r}")
    v = rec[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ModelError(f"{where}: {key!r} must be an integer, got {v!r}")
    return v


def _rational_field(rec: dict, where: str) -> Fraction:
    if "c" not in rec:
        raise ModelError(f"{where}: missing key 'c'")
    v = rec["c"]
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise ModelError(f"{where}: 'c' must be a rational string 'p' or 'p/q', got {v!r}")
    try:
        return Fraction(v) if isinstance(v, int) else Fraction(v.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ModelError(f"{where}: bad rational {v!r}") from exc


def _records(data: dict, key: str, fields: set[str]) -> list[dict]:
    recs = data.get(key, [])
    if not isinstance(recs, list):
        raise ModelError(f"{key!r} must be an array of records")
    for n, rec in enumerate(recs):
        if not isinstance(rec, dict):
            raise ModelError(f"{key}[{n}] must be an object")
        extra = set(rec) - fields
        if extra:
            raise ModelError(f"{key}[{n}]: unknown keys {sorted(extra)}")
    return recs


def parse_model(text: str) -> LieModel:
    """Parse a model file without running the d^2 / unimodularity checks."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"parse error: {exc}") from exc
    if not isinstance(data, dict):
        raise ModelError("parse error: model file must hold a JSON object")
    unknown = set(data) - MODEL_KEYS
    if unknown:
        raise ModelError(f"unknown keys {sorted(unknown)}")
    missing = REQUIRED_KEYS - set(data)
    if missing:
        raise ModelError(f"missing keys {sorted(missing)}")
    if not isinstance(data["name"], str):
        raise ModelError("'name' must be a string")
    dim = _int_field(data, "dim", "model")
    if dim < 2 or dim % 2:
        raise ModelError(f"dimension must be even and >= 2, got {dim}")

    terms = []
    for n, rec in enumerate(_records(data, "structure", {"i", "j", "k", "c"})):
        where = f"structure[{n}]"
        i, j, k = (_int_field(rec, key, where) for key in ("i", "j", "k"))
        if not (1 <= i < j <= dim) or not 1 <= k <= dim:
            raise ModelError(f"{where}: index out of range (need 1 <= i < j <= {dim}, 1 <= k <= {dim})")
        terms.append(StructureTerm(k=k, i=i, j=j, c=_rational_field(rec, where)))

    omega = None
    if "omega" in data:
        otms: dict[tuple[int, int], Fraction] = {}
        for n, rec in enumerate(_records(data, "omega", {"i", "j", "c"})):
            where = f"omega[{n}]"
            i, j = _int_field(rec, "i", where), _int_field(rec, "j", where)
            if not 1 <= i < j <= dim:
                raise ModelError(f"{where}: index out of range (need 1 <= i < j <= {dim})")
            otms[(i, j)] = otms.get((i, j), Fraction(0)) + _rational_field(rec, where)
        omega = Form(dim, otms)

    comment = data.get("comment", "")
    if not isinstance(comment, str):
        raise ModelError("'comment' must be a string")
    return LieModel(name=data["name"], dim=dim, structure=tuple(terms), omega=omega, comment=comment)


def load_model(text: str) -> LieModel:
    """Parse and validate; raises :class:`ModelError` on any failure."""
    model = parse_model(text)
    report = validate(model)
    if not report.ok:
        raise ModelError(f"model {model.name!r} rejected: " + "; ".join(report.messages))
    return model


def load_model_file(path: str | Path) -> LieModel:
    return load_model(Path(path).read_text(encoding="utf-8"))


def dump_model(model: LieModel) -> str:
    """Canonical model-file text (sorted records, rationals as strings)."""
    data: dict = {"name": model.name, "dim": model.dim}
    if model.comment:
        data["comment"] = model.comment
    data["structure"] = [
        {"i": t.i, "j": t.j, "k": t.k, "c": str(t.c)}
        for t in sorted(model.structure, key=lambda t: (t.k, t.i, t.j))
    ]
    if model.omega is not None:
        data["omega"] = [{"i": i, "j": j, "c": str(c)} for (i, j), c in model.omega.items()]
    return json.dumps(data, indent=2) + "\n"
