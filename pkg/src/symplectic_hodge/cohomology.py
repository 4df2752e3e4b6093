"""de Rham and Tseng-Yau cohomologies of an invariant complex, with audits.

Quotient dimensions come from exact ranks of kernel and image matrices;
harmonic spaces are exact null spaces of the matching Laplacians. The two
are computed independently and compared.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .exterior import Form
from .linalg import (
    Matrix,
    column,
    columns_from_forms,
    forms_from_columns,
    hstack,
    image,
    is_zero,
    kernel,
    rank,
    solve_in_span,
    vstack,
    zeros,
)
from .operators import OperatorSuite

FLAVORS = ("dR", "dplus", "ddlambda")


@dataclass
class CohomologySpace:
    degree: int
    flavor: str
    dimension: int
    harmonic_dimension: int
    representatives: list[Form] = field(repr=False)
    harmonic_basis: list[Form] = field(repr=False)
    subcomplex_ok: bool = True

    @property
    def consistent(self) -> bool:
        return self.subcomplex_ok and self.dimension == self.harmonic_dimension


@dataclass
class Audit:
    name: str
    degree: int | None
    passed: bool
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out: dict = {"name": self.name}
        if self.degree is not None:
            out["degree"] = self.degree
        out["passed"] = self.passed
        if self.details:
            out["details"] = self.details
        return out


def _quotient(numerator: Matrix, denominator: Matrix) -> tuple[int, Matrix, bool]:
    """Dimension, representative columns, and whether denominator <= numerator."""
    contained = solve_in_span(numerator, denominator)
    base = image(denominator)
    reps = []
    current = base
    r = rank(current)
    for j in range(numerator.shape[1]):
        cand = hstack(current, _col(numerator, j))
        rc = rank(cand)
        if rc > r:
            reps.append(j)
            current, r = cand, rc
    rep_mat = hstack(*[_col(numerator, j) for j in reps]) if reps else zeros(numerator.shape[0], 0)
    return rank(numerator) - rank(denominator), rep_mat, contained


def _col(m: Matrix, j: int) -> Matrix:
    return m.extract(list(range(m.shape[0])), [j])


def _space(suite: OperatorSuite, k: int, flavor: str, numerator: Matrix, denominator: Matrix, laplacian: Matrix):
    dim, reps, ok = _quotient(numerator, denominator)
    harm = kernel(laplacian)
    return CohomologySpace(
        degree=k,
        flavor=flavor,
        dimension=dim,
        harmonic_dimension=harm.shape[1],
        representatives=forms_from_columns(reps, suite.dim, k),
        harmonic_basis=forms_from_columns(harm, suite.dim, k),
        subcomplex_ok=ok,
    )


def de_rham(suite: OperatorSuite, k: int) -> CohomologySpace:
    d = suite.d
    return _space(suite, k, "dR", kernel(d[k]), d[k - 1], suite.laplacian_d[k])


def h_dplus(suite: OperatorSuite, k: int) -> CohomologySpace:
    """``(ker d cap ker d^L) / im dd^L`` on k-forms."""
    closed = kernel(vstack(suite.d[k], suite.d_lambda[k]))
    return _space(suite, k, "dplus", closed, suite.dd_lambda[k], suite.laplacian_dplus[k])


def h_ddlambda(suite: OperatorSuite, k: int) -> CohomologySpace:
    """``ker dd^L / (im d + im d^L)`` on k-forms."""
    exact = hstack(suite.d[k - 1], suite.d_lambda[k + 1])
    return _space(suite, k, "ddlambda", kernel(suite.dd_lambda[k]), exact, suite.laplacian_ddlambda[k])


def spaces(suite: OperatorSuite, flavor: str) -> list[CohomologySpace]:
    fn = {"dR": de_rham, "dplus": h_dplus, "ddlambda": h_ddlambda}[flavor]
    return [fn(suite, k) for k in range(suite.dim + 1)]


# -- decompositions ----------------------------------------------------------


def _orthogonal_sum(suite: OperatorSuite, k: int, name: str, parts: list[Matrix]) -> Audit:
    gram = suite.gram[k]
    bases = [image(p) for p in parts]
    dims = [b.shape[1] for b in bases]
    orthogonal = all(
        is_zero(bases[a].transpose() * gram * bases[b])
        for a in range(len(bases))
        for b in range(a + 1, len(bases))
    )
    total = comb(suite.dim, k)
    spans = rank(hstack(*bases)) == total if total else True
    return Audit(
        name=f"decomposition.{name}",
        degree=k,
        passed=orthogonal and sum(dims) == total and spans,
        details={"summands": dims, "total": total, "orthogonal": orthogonal},
    )


def decomposition_audit(suite: OperatorSuite, k: int) -> list[Audit]:
    s = suite
    return [
        _orthogonal_sum(s, k, "dplus", [
            kernel(s.laplacian_dplus[k]),
            s.dd_lambda[k],
            hstack(s.d_star[k + 1], s.d_lambda_star[k - 1]),
        ]),
        _orthogonal_sum(s, k, "ddlambda", [
            kernel(s.laplacian_ddlambda[k]),
            s.dd_lambda_star[k],
            hstack(s.d[k - 1], s.d_lambda[k + 1]),
        ]),
        _orthogonal_sum(s, k, "dlambda", [
            kernel(s.laplacian_dlambda[k]),
            s.d_lambda[k + 1],
            s.d_lambda_star[k - 1],
        ]),
        _orthogonal_sum(s, k, "de_rham", [
            kernel(s.laplacian_d[k]),
            s.d[k - 1],
            s.d_star[k + 1],
        ]),
    ]


# -- Lefschetz ---------------------------------------------------------------


def lefschetz_audit(suite: OperatorSuite, k: int) -> list[Audit]:
    """``L^{n-k}`` maps harmonic k-forms bijectively onto harmonic (2n-k)-forms."""
    n, n2 = suite.n, suite.dim
    if k > n:
        raise ValueError(f"Lefschetz audit needs k <= n = {n}")
    lp = suite.L_power(n - k)[k]
    out = []
    for flavor, lap in (("dplus", suite.laplacian_dplus), ("ddlambda", suite.laplacian_ddlambda)):
        src = kernel(lap[k])
        tgt_dim = kernel(lap[n2 - k]).shape[1]
        img = lp * src
        lands = is_zero(lap[n2 - k] * img)
        injective = rank(img) == src.shape[1]
        out.append(Audit(
            name=f"lefschetz.{flavor}",
            degree=k,
            passed=lands and injective and src.shape[1] == tgt_dim,
            details={"source": src.shape[1], "target": tgt_dim, "image_rank": rank(img)},
        ))
    return out


@dataclass
class Witness:
    degree: int
    form: Form

    def as_dict(self) -> dict:
        return {
            "degree": self.degree,
            "form": str(self.form),
            "coefficients": {",".join(map(str, idx)): str(c) for idx, c in self.form.items()},
        }


@dataclass
class LefschetzVerdict:
    holds: bool
    bijective: dict[int, bool]
    surjective: dict[int, bool]
    witness: Witness | None = None

    @property
    def formulations_agree(self) -> bool:
        return all(self.surjective.values()) == self.holds

    def as_dict(self) -> dict:
        out: dict = {
            "holds": self.holds,
            "bijective": {str(k): v for k, v in sorted(self.bijective.items())},
            "surjective": {str(k): v for k, v in sorted(self.surjective.items())},
        }
        if self.witness is not None:
            out["witness"] = self.witness.as_dict()
        return out


def _lefschetz_image(suite: OperatorSuite, k: int, reps: list[Form]) -> Matrix:
    r = columns_from_forms(reps, suite.dim, k)
    return suite.L_power(suite.n - k)[k] * r


def hard_lefschetz(suite: OperatorSuite, de_rham_spaces: list[CohomologySpace] | None = None) -> LefschetzVerdict:
    """``[a] -> [omega^{n-k} ^ a]`` on de Rham cohomology, for every ``k <= n``.

    Bijectivity is tested directly. The surjectivity of
    ``L^j: H^{n-j} -> H^{n+j}`` is computed separately, by comparing spans
    with the closed forms, and reported alongside.
    """
    n, n2 = suite.n, suite.dim
    spaces_ = de_rham_spaces or spaces(suite, "dR")
    bijective: dict[int, bool] = {}
    surjective: dict[int, bool] = {}
    witness = None
    for k in range(n + 1):
        reps = spaces_[k].representatives
        img = _lefschetz_image(suite, k, reps)
        exact = image(suite.d[n2 - k - 1])
        induced_rank = rank(hstack(exact, img)) - exact.shape[1]
        bijective[k] = induced_rank == len(reps) == spaces_[n2 - k].dimension
        if not bijective[k] and witness is None and reps:
            null = kernel(hstack(img, exact))
            if null.shape[1]:
                x = column(null, 0)[: len(reps)]
                form = Form(n2)
                for c, r in zip(x, reps):
                    form = form + r * c
                witness = Witness(k, form)

    for j in range(n + 1):
        reps = spaces_[n - j].representatives
        img = _lefschetz_image(suite, n - j, reps)
        closed = kernel(suite.d[n + j])
        exact = suite.d[n + j - 1]
        surjective[j] = rank(hstack(exact, img)) == closed.shape[1]
    return LefschetzVerdict(all(bijective.values()), bijective, surjective, witness)


@dataclass
class MathieuVerdict:
    holds: bool
    per_degree: dict[int, bool]
    witness: Witness | None = None

    def as_dict(self) -> dict:
        out: dict = {"holds": self.holds, "per_degree": {str(k): v for k, v in sorted(self.per_degree.items())}}
        if self.witness is not None:
            out["witness"] = self.witness.as_dict()
        return out


def mathieu_check(suite: OperatorSuite, de_rham_spaces: list[CohomologySpace] | None = None) -> MathieuVerdict:
    """Does every de Rham class contain a d- and d^L-closed representative?

    A class ``[r]`` qualifies iff ``d^L r`` lies in the image of ``d^L d``.
    """
    spaces_ = de_rham_spaces or spaces(suite, "dR")
    per_degree: dict[int, bool] = {}
    witness = None
    for k, sp in enumerate(spaces_):
        reachable = suite.d_lambda[k] * suite.d[k - 1]
        failing = [
            r for r in sp.representatives
            if not solve_in_span(reachable, columns_from_forms([suite.d_lambda.apply(r)], suite.dim, k - 1))
        ]
        per_degree[k] = not failing
        if failing and witness is None:
            witness = Witness(k, failing[0])
    return MathieuVerdict(all(per_degree.values()), per_degree, witness)


def star_duality_audit(suite: OperatorSuite, k: int) -> Audit:
    """``*_g`` maps dd^L-harmonic k-forms onto d+d^L-harmonic (2n-k)-forms."""
    n2 = suite.dim
    src = kernel(suite.laplacian_ddlambda[k])
    tgt = kernel(suite.laplacian_dplus[n2 - k])
    img = suite.star_g[k] * src
    lands = is_zero(suite.laplacian_dplus[n2 - k] * img)
    full = rank(img) == src.shape[1] == tgt.shape[1]
    return Audit("star_duality", k, lands and full, {"source": src.shape[1], "target": tgt.shape[1]})


# -- report --------------------------------------------------------------------


def _euler(dims: list[int]) -> int:
    return sum((-1) ** k * b for k, b in enumerate(dims))


@dataclass
class CohomologyReport:
    model: str
    lam: Fraction
    dim: int
    betti: list[int]
    beta_s1: list[int]
    beta_s2: list[int]
    hlp: LefschetzVerdict
    mathieu: MathieuVerdict
    audits: list[Audit]

    @property
    def chi(self) -> int:
        return _euler(self.betti)

    @property
    def chi_s1(self) -> int:
        return _euler(self.beta_s1)

    @property
    def chi_s2(self) -> int:
        return _euler(self.beta_s2)

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.audits)

    def failed_audits(self) -> list[Audit]:
        return [a for a in self.audits if not a.passed]

    def as_dict(self) -> dict:
        return {
            "model": self.model,
            "lambda": str(self.lam),
            "dims": {"dR": self.betti, "dplus": self.beta_s1, "ddlambda": self.beta_s2},
            "euler": {"chi": self.chi, "chi_s1": self.chi_s1, "chi_s2": self.chi_s2},
            "hlp": self.hlp.as_dict(),
            "mathieu": self.mathieu.as_dict(),
            "audits": [a.as_dict() for a in self.audits],
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=False) + "\n"

    def to_markdown(self) -> str:
        degs = range(self.dim + 1)
        head = "| | " + " | ".join(f"k={k}" for k in degs) + " | Euler |"
        rule = "|---" * (self.dim + 3) + "|"
        rows = [
            ("b_k (de Rham)", self.betti, self.chi),
            ("beta^{s,1}_k (d+dLambda)", self.beta_s1, self.chi_s1),
            ("beta^{s,2}_k (ddLambda)", self.beta_s2, self.chi_s2),
        ]
        lines = [
            f"# Cohomology report: {self.model}", "",
            f"lambda = {self.lam}", "",
            "Groups of the invariant-form complex.", "",
            head, rule,
        ]
        for label, vals, e in rows:
            lines.append(f"| {label} | " + " | ".join(str(v) for v in vals) + f" | {e} |")
        lines += ["", "## Verdicts", ""]
        lines.append(f"- hard Lefschetz: {'holds' if self.hlp.holds else 'fails'}")
        if self.hlp.witness:
            w = self.hlp.witness
            lines.append(f"  - witness class in degree {w.degree}: `{w.form}`")
        lines.append(f"- Mathieu (symplectic harmonic representatives): {'holds' if self.mathieu.holds else 'fails'}")
        if self.mathieu.witness:
            w = self.mathieu.witness
            lines.append(f"  - witness class in degree {w.degree}: `{w.form}`")
        lines += ["", "## Audits", "", "| audit | degree | result |", "|---|---|---|"]
        for a in self.audits:
            deg = "" if a.degree is None else str(a.degree)
            lines.append(f"| {a.name} | {deg} | {'pass' if a.passed else 'FAIL'} |")
        return "\n".join(lines) + "\n"


def euler_report(suite: OperatorSuite) -> CohomologyReport:
    n, n2 = suite.n, suite.dim
    dr = spaces(suite, "dR")
    dp = spaces(suite, "dplus")
    dd = spaces(suite, "ddlambda")
    audits: list[Audit] = []
    for flavor, sp in (("dR", dr), ("dplus", dp), ("ddlambda", dd)):
        for s in sp:
            audits.append(Audit(
                f"quotient_vs_harmonic.{flavor}", s.degree, s.consistent,
                {"quotient": s.dimension, "harmonic": s.harmonic_dimension},
            ))
    for k in range(n2 + 1):
        audits += decomposition_audit(suite, k)
    for k in range(n + 1):
        audits += lefschetz_audit(suite, k)
    for k in range(n2 + 1):
        audits.append(star_duality_audit(suite, k))

    b = [s.dimension for s in dr]
    b1 = [s.dimension for s in dp]
    b2 = [s.dimension for s in dd]
    audits.append(Audit("betti_duality", None, all(b1[k] == b2[n2 - k] for k in range(n2 + 1))))

    hlp = hard_lefschetz(suite, dr)
    mathieu = mathieu_check(suite, dr)
    audits.append(Audit("hlp_formulations_agree", None, hlp.formulations_agree))
    audits.append(Audit("mathieu_equals_hlp", None, hlp.holds == mathieu.holds))
    if hlp.holds:
        iso = all(b1[k] == b[k] == b2[n2 - k] for k in range(n2 + 1))
        chi_eq = _euler(b) == _euler(b1) == _euler(b2)
        audits.append(Audit("hlp_isomorphisms", None, iso))
        audits.append(Audit("hlp_euler_equal", None, chi_eq))
    return CohomologyReport(suite.model.name, suite.lam, n2, b, b1, b2, hlp, mathieu, audits)
