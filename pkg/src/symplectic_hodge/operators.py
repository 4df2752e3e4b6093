"""Every operator of symplectic Hodge theory as an exact graded matrix.

Signs that depend on degree are applied at the *source* degree of each
composite. Both Hodge stars are obtained from their defining wedge
identities, ``a ^ *b = <a, b> vol``, by reading off the coefficient of the
complementary basis form; no closed-form sign tables are used.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from sympy import QQ

from .exterior import Form, as_scalar, basis, basis_position, complement_sign, contract, dim_forms, wedge
from .lie_model import LieModel
from .linalg import (
    GradedOperator,
    Matrix,
    column,
    exterior_power,
    from_columns,
    from_rows,
    inverse,
    same,
    to_fraction,
    zeros,
)
from .symplectic import CompatibleTriple, darboux_basis


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


@dataclass(frozen=True)
class InnerProduct:
    """Gram matrices of the metric on each ``Omega^k`` plus the volume form."""

    dim: int
    gram: dict[int, Matrix] = field(repr=False)
    volume: Form

    def pair(self, k: int, a: Form, b: Form) -> Fraction:
        va = from_rows([a.vector(k)])
        vb = from_rows([[x] for x in b.vector(k)])
        return to_fraction((va * self.gram[k] * vb).to_list()[0][0])


class StarOperator:
    """A map ``Omega^k -> Omega^{dim-k}`` for every k.

    The shift ``dim - 2k`` varies with degree, so this is not a
    :class:`GradedOperator`; composing two stars or a star with graded
    operators yields ordinary graded operators.
    """

    def __init__(self, dim: int, mats: dict[int, Matrix]):
        self.dim = dim
        self.mats = mats

    def __getitem__(self, k: int) -> Matrix:
        if 0 <= k <= self.dim:
            return self.mats[k]
        return zeros(0, 0)

    def sandwich(self, op: GradedOperator, name: str = "") -> GradedOperator:
        """``* op *`` as a graded operator; its shift is ``-op.shift``."""
        n2 = self.dim

        def block(k: int) -> Matrix:
            mid = n2 - k
            tgt = mid + op.shift
            if not 0 <= tgt <= n2:
                return zeros(dim_forms(n2, k - op.shift), dim_forms(n2, k))
            return self[tgt] * op[mid] * self[k]

        return GradedOperator.build(n2, -op.shift, block, name)

    def squared(self) -> GradedOperator:
        return GradedOperator.build(self.dim, 0, lambda k: self[self.dim - k] * self[k], "**")

    def apply(self, form: Form) -> Form:
        out = Form(self.dim)
        for k in sorted(form.degrees()):
            vec = from_columns([form.vector(k)], dim_forms(self.dim, k))
            out = out + Form.from_vector(self.dim, self.dim - k, column(self[k] * vec, 0))
        return out

    def then(self, op: GradedOperator) -> "StarOperator":
        """``op o *`` when ``op`` preserves degree."""
        if op.shift != 0:
            raise ValueError("only degree-preserving operators compose with a star into a star")
        return StarOperator(self.dim, {k: op[self.dim - k] * self[k] for k in range(self.dim + 1)})

    def after(self, op: GradedOperator) -> "StarOperator":
        """``* o op`` when ``op`` preserves degree."""
        if op.shift != 0:
            raise ValueError("only degree-preserving operators compose with a star into a star")
        return StarOperator(self.dim, {k: self[k] * op[k] for k in range(self.dim + 1)})

    def equals(self, other: "StarOperator") -> bool:
        return all(same(self[k], other[k]) for k in range(self.dim + 1))


def gram_adjoint(op: GradedOperator, gram: dict[int, Matrix], name: str = "") -> GradedOperator:
    """Adjoint of ``op`` for the inner products ``gram``: ``G_src^{-1} A^T G_tgt``."""
    n2 = op.dim
    inv = {k: inverse(m) for k, m in gram.items()}

    def block(k: int) -> Matrix:
        src = k - op.shift
        if not 0 <= src <= n2:
            return zeros(0, dim_forms(n2, k))
        return inv[src] * op[src].transpose() * gram[k]

    return GradedOperator.build(n2, -op.shift, block, name)


class OperatorSuite:
    """All operators for one model, one compatible triple and one weight lambda.

    Operators are assembled lazily and memoized; assembly is deterministic, so
    concurrent recomputation is harmless.
    """

    def __init__(self, model: LieModel, triple: CompatibleTriple | None = None, lam=1):
        lam = as_scalar(lam)
        if lam <= 0:
            raise ValueError(f"lambda must be positive, got {lam}")
        if triple is None:
            if model.omega is None:
                raise ValueError(f"model {model.name!r} has no symplectic form")
            triple = darboux_basis(model.omega)
        if triple.dim != model.dim:
            raise ValueError("triple and model dimensions differ")
        self.model = model
        self.triple = triple
        self.lam = lam
        self.dim = model.dim
        self.n = model.dim // 2

    # -- inner products and stars ------------------------------------------

    @cached_property
    def volume(self) -> Form:
        return self.triple.structure.volume()

    @cached_property
    def _vol_coeff(self) -> Fraction:
        return self.volume.coeff(tuple(range(1, self.dim + 1)))

    @cached_property
    def gram(self) -> dict[int, Matrix]:
        """Metric Gram matrix on ``Omega^k``: minors of the cometric."""
        c = self.triple.cometric
        return {k: exterior_power(c, k) for k in range(self.dim + 1)}

    @cached_property
    def symplectic_pairing(self) -> dict[int, Matrix]:
        """``(omega^{-1})^k`` on ``Omega^k``: minors of the inverse of omega's matrix."""
        w_inv = self.triple.structure.inverse_matrix()
        return {k: exterior_power(w_inv, k) for k in range(self.dim + 1)}

    @cached_property
    def inner_product(self) -> InnerProduct:
        return InnerProduct(self.dim, self.gram, self.volume)

    @cached_property
    def star_g(self) -> StarOperator:
        return _star(self.dim, self.gram, self._vol_coeff)

    @cached_property
    def star_s(self) -> StarOperator:
        return _star(self.dim, self.symplectic_pairing, self._vol_coeff)

    # -- first-order operators ---------------------------------------------

    @cached_property
    def d(self) -> GradedOperator:
        return self.model.d

    @cached_property
    def d_lambda(self) -> GradedOperator:
        """``(-1)^{k+1} *_s d *_s`` on k-forms."""
        return self.star_s.sandwich(self.d).signed(lambda k: _sign(k + 1)).named("dL")

    @cached_property
    def d_star(self) -> GradedOperator:
        """``-*_g d *_g``."""
        return self.star_g.sandwich(self.d).scaled(-1).named("d*")

    @cached_property
    def d_lambda_star(self) -> GradedOperator:
        """``*_g d^Lambda *_g``."""
        return self.star_g.sandwich(self.d_lambda).named("dL*")

    @cached_property
    def dd_lambda(self) -> GradedOperator:
        return (self.d @ self.d_lambda).named("ddL")

    @cached_property
    def dd_lambda_star(self) -> GradedOperator:
        """``(-1)^{k+1} *_g d d^Lambda *_g`` on k-forms."""
        return self.star_g.sandwich(self.dd_lambda).signed(lambda k: _sign(k + 1)).named("(ddL)*")

    # -- Lefschetz ------------------------------------------------------------

    @cached_property
    def L(self) -> GradedOperator:
        omega = self.triple.omega

        def block(k: int) -> Matrix:
            cols = [wedge(omega, Form.basis_form(self.dim, idx)).vector(k + 2) for idx in basis(self.dim, k)]
            return from_columns(cols, dim_forms(self.dim, k + 2))

        return GradedOperator.build(self.dim, 2, block, "L")

    @cached_property
    def Lambda(self) -> GradedOperator:
        """``1/2 (omega^{-1})^{ij} i_{e_i} i_{e_j}``."""
        w_inv = self.triple.structure.inverse_matrix()
        n2 = self.dim

        def apply(a: Form) -> Form:
            out = Form(n2)
            for i in range(1, n2 + 1):
                for j in range(1, n2 + 1):
                    c = w_inv[i - 1][j - 1]
                    if c:
                        out = out + contract(i, contract(j, a)) * (c / 2)
            return out

        def block(k: int) -> Matrix:
            cols = [apply(Form.basis_form(n2, idx)).vector(k - 2) for idx in basis(n2, k)]
            return from_columns(cols, dim_forms(n2, k - 2))

        return GradedOperator.build(n2, -2, block, "Lambda")

    def L_power(self, p: int) -> GradedOperator:
        out = GradedOperator.identity(self.dim)
        for _ in range(p):
            out = self.L @ out
        return out

    # -- Laplacians -------------------------------------------------------------

    def _weighted(self, op: GradedOperator) -> GradedOperator:
        return op.scaled(self.lam)

    @cached_property
    def laplacian_d(self) -> GradedOperator:
        d, ds = self.d, self.d_star
        return (d @ ds + ds @ d).named("Delta_d")

    @cached_property
    def laplacian_dplus(self) -> GradedOperator:
        """``dd^L (dd^L)^* + lambda (d^* d + d^L* d^L)``."""
        d, dl, ds, dls = self.d, self.d_lambda, self.d_star, self.d_lambda_star
        return (self.dd_lambda @ self.dd_lambda_star + self._weighted(ds @ d + dls @ dl)).named("Delta_d+dL")

    @cached_property
    def elliptic_dplus(self) -> GradedOperator:
        d, dl, ds, dls = self.d, self.d_lambda, self.d_star, self.d_lambda_star
        ddl, ddls = self.dd_lambda, self.dd_lambda_star
        fourth = ddl @ ddls + ddls @ ddl + ds @ dl @ dls @ d + dls @ d @ ds @ dl
        return (fourth + self._weighted(ds @ d + dls @ dl)).named("D_d+dL")

    @cached_property
    def laplacian_ddlambda(self) -> GradedOperator:
        """``(dd^L)^* dd^L + lambda (d d^* + d^L d^L*)``."""
        d, dl, ds, dls = self.d, self.d_lambda, self.d_star, self.d_lambda_star
        return (self.dd_lambda_star @ self.dd_lambda + self._weighted(d @ ds + dl @ dls)).named("Delta_ddL")

    @cached_property
    def elliptic_ddlambda(self) -> GradedOperator:
        d, dl, ds, dls = self.d, self.d_lambda, self.d_star, self.d_lambda_star
        ddl, ddls = self.dd_lambda, self.dd_lambda_star
        fourth = ddls @ ddl + ddl @ ddls + d @ dls @ dl @ ds + dl @ ds @ d @ dls
        return (fourth + self._weighted(d @ ds + dl @ dls)).named("D_ddL")

    @cached_property
    def laplacian_dlambda(self) -> GradedOperator:
        dl, dls = self.d_lambda, self.d_lambda_star
        return (dl @ dls + dls @ dl).named("Delta_dL")

    # -- adjoints by Gram matrices (independent route) -------------------------

    def gram_adjoint(self, op: GradedOperator) -> GradedOperator:
        return gram_adjoint(op, self.gram, f"{op.name}^T")

    def with_lambda(self, lam) -> "OperatorSuite":
        return OperatorSuite(self.model, self.triple, lam)


def _star(dim: int, pairing: dict[int, Matrix], vol_coeff: Fraction) -> StarOperator:
    c = QQ(vol_coeff.numerator, vol_coeff.denominator)
    mats = {}
    for k in range(dim + 1):
        src = basis(dim, k)
        tgt = basis_position(dim, dim - k)
        rows = pairing[k].to_list()
        out = [[QQ(0)] * len(src) for _ in range(len(tgt))]
        for a, idx in enumerate(src):
            comp, s = complement_sign(idx, dim)
            # e^I ^ *e^J = s * x[comp(I), J] e^top must equal pairing[I, J] * vol
            for b in range(len(src)):
                out[tgt[comp]][b] = s * c * rows[a][b]
        mats[k] = from_rows(out, len(src))
    return StarOperator(dim, mats)
