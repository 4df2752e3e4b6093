"""Named exact identities of the operator calculus, runnable as one suite.

Every check is a zero-tolerance matrix or form comparison. The suite backs the
``verify`` command; each check reports the degrees where it failed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .cohomology import euler_report, spaces
from .exterior import Form, basis, wedge
from .linalg import GradedOperator, Matrix, entries, eye, hstack, is_zero, kernel, qq, rank, same, vstack
from .operators import OperatorSuite
from .symplectic import change_basis, darboux_basis

Check = Callable[[OperatorSuite], "CheckResult"]


@dataclass
class CheckResult:
    name: str
    passed: bool
    failed_degrees: list[int] = field(default_factory=list)
    detail: str = ""

    def as_dict(self) -> dict:
        out: dict = {"name": self.name, "passed": self.passed}
        if self.failed_degrees:
            out["failed_degrees"] = self.failed_degrees
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class SuiteResult:
    model: str
    lam: Fraction
    checks: list[CheckResult]
    verdicts: dict[str, bool]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        return {
            "model": self.model,
            "lambda": str(self.lam),
            "passed": self.passed,
            "verdicts": {k: ("holds" if v else "fails") for k, v in self.verdicts.items()},
            "checks": [c.as_dict() for c in self.checks],
        }

    def to_markdown(self) -> str:
        lines = [f"# Identity suite: {self.model}", "", f"lambda = {self.lam}", "", "| check | result |", "|---|---|"]
        for c in self.checks:
            mark = "pass" if c.passed else "FAIL" + (f" (k = {c.failed_degrees})" if c.failed_degrees else "")
            lines.append(f"| {c.name} | {mark} |")
        lines += ["", "## Verdicts", ""]
        lines += [f"- {k}: {'holds' if v else 'fails'}" for k, v in self.verdicts.items()]
        return "\n".join(lines) + "\n"


def _per_degree(name: str, dim: int, ok: Callable[[int], bool]) -> CheckResult:
    bad = [k for k in range(dim + 1) if not ok(k)]
    return CheckResult(name, not bad, bad)


def _zero(name: str, op: GradedOperator) -> CheckResult:
    return _per_degree(name, op.dim, lambda k: is_zero(op[k]))


def _equal(name: str, a: GradedOperator, b: GradedOperator) -> CheckResult:
    bad = a.mismatched_degrees(b)
    return CheckResult(name, not bad, bad)


def _same_span(a: Matrix, b: Matrix) -> bool:
    r = rank(a)
    return r == rank(b) == rank(hstack(a, b))


def _scalar_op(dim: int, coeff: Callable[[int], int]) -> GradedOperator:
    return GradedOperator.build(dim, 0, lambda k: eye(len(basis(dim, k))) * qq(coeff(k)))


def random_form(rng: random.Random, dim: int, k: int, density: float = 0.6) -> Form:
    terms = {}
    for idx in basis(dim, k):
        if rng.random() < density:
            terms[idx] = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
    return Form(dim, terms)


# -- the checks ------------------------------------------------------------------


def check_d_squared(s: OperatorSuite) -> CheckResult:
    return _zero("d_squared_zero", s.d @ s.d)


def check_dlambda_squared(s: OperatorSuite) -> CheckResult:
    return _zero("dlambda_squared_zero", s.d_lambda @ s.d_lambda)


def check_anticommute(s: OperatorSuite) -> CheckResult:
    return _zero("d_dlambda_anticommute", s.d @ s.d_lambda + s.d_lambda @ s.d)


def check_star_s_involution(s: OperatorSuite) -> CheckResult:
    return _equal("star_s_involution", s.star_s.squared(), GradedOperator.identity(s.dim))


def check_star_g_square(s: OperatorSuite) -> CheckResult:
    n2 = s.dim
    return _equal("star_g_square", s.star_g.squared(), _scalar_op(n2, lambda k: (-1) ** (k * (n2 - k))))


def check_koszul(s: OperatorSuite) -> CheckResult:
    return _equal("dlambda_equals_commutator", s.d_lambda, s.d @ s.Lambda - s.Lambda @ s.d)


def check_sl2(s: OperatorSuite) -> CheckResult:
    comm = s.Lambda @ s.L - s.L @ s.Lambda
    return _equal("lambda_L_commutator", comm, _scalar_op(s.dim, lambda k: s.n - k))


def check_adjoints(s: OperatorSuite) -> list[CheckResult]:
    return [
        _equal("adjoint_d", s.d_star, s.gram_adjoint(s.d)),
        _equal("adjoint_dlambda", s.d_lambda_star, s.gram_adjoint(s.d_lambda)),
        _equal("adjoint_ddlambda", s.dd_lambda_star, s.gram_adjoint(s.dd_lambda)),
    ]


def check_star_intertwines(s: OperatorSuite) -> CheckResult:
    left = s.star_g.then(s.laplacian_dplus)
    right = s.star_g.after(s.laplacian_ddlambda)
    bad = [k for k in range(s.dim + 1) if not same(left[k], right[k])]
    return CheckResult("star_g_intertwines_laplacians", not bad, bad)


def check_laplacian_commutes(s: OperatorSuite) -> list[CheckResult]:
    lap = s.laplacian_dplus
    return [
        _zero("laplacian_dplus_commutes_L", lap @ s.L - s.L @ lap),
        _zero("laplacian_dplus_commutes_Lambda", lap @ s.Lambda - s.Lambda @ lap),
    ]


def check_pairing_symmetry(s: OperatorSuite, pairs: int = 100, seed: int = 0) -> list[CheckResult]:
    """``a ^ *_s b = (-1)^k b ^ *_s a`` and both stars' defining identities on random forms."""
    rng = random.Random(seed)
    n2 = s.dim
    sym_bad, def_s_bad, def_g_bad = set(), set(), set()
    for _ in range(pairs):
        k = rng.randint(0, n2)
        a, b = random_form(rng, n2, k), random_form(rng, n2, k)
        ab = wedge(a, s.star_s.apply(b))
        ba = wedge(b, s.star_s.apply(a))
        if ab != ba * (-1) ** k:
            sym_bad.add(k)
        va = [[x] for x in a.vector(k)]
        vb = [[x] for x in b.vector(k)]
        ps = _bilinear(va, s.symplectic_pairing[k], vb)
        pg = _bilinear(va, s.gram[k], vb)
        if ab != s.volume * ps:
            def_s_bad.add(k)
        if wedge(a, s.star_g.apply(b)) != s.volume * pg:
            def_g_bad.add(k)
    return [
        CheckResult("star_s_pairing_symmetry", not sym_bad, sorted(sym_bad), f"{pairs} random pairs"),
        CheckResult("star_s_defining_identity", not def_s_bad, sorted(def_s_bad), f"{pairs} random pairs"),
        CheckResult("star_g_defining_identity", not def_g_bad, sorted(def_g_bad), f"{pairs} random pairs"),
    ]


def _bilinear(u: list[list[Fraction]], m: Matrix, v: list[list[Fraction]]) -> Fraction:
    rows = entries(m)
    return sum((u[i][0] * rows[i][j] * v[j][0] for i in range(len(u)) for j in range(len(v))), Fraction(0))


def _laplacians(s: OperatorSuite) -> dict[str, GradedOperator]:
    return {
        "d": s.laplacian_d,
        "dplus": s.laplacian_dplus,
        "D_dplus": s.elliptic_dplus,
        "ddlambda": s.laplacian_ddlambda,
        "D_ddlambda": s.elliptic_ddlambda,
        "dlambda": s.laplacian_dlambda,
    }


def check_laplacians_self_adjoint(s: OperatorSuite) -> list[CheckResult]:
    out = []
    for name, lap in _laplacians(s).items():
        out.append(_equal(f"self_adjoint.{name}", lap, s.gram_adjoint(lap)))
        out.append(_per_degree(
            f"positive_semidefinite.{name}", s.dim, lambda k, lap=lap: is_psd(entries(s.gram[k] * lap[k]))
        ))
    return out


def check_kernels(s: OperatorSuite) -> list[CheckResult]:
    d, dl = s.d, s.d_lambda
    triple_dplus = lambda k: vstack(d[k], dl[k], s.dd_lambda_star[k])  # noqa: E731
    triple_dd = lambda k: vstack(s.d_star[k], s.d_lambda_star[k], s.dd_lambda[k])  # noqa: E731
    return [
        _per_degree("kernel_D_equals_Delta.dplus", s.dim,
                    lambda k: _same_span(kernel(s.laplacian_dplus[k]), kernel(s.elliptic_dplus[k]))),
        _per_degree("kernel_D_equals_Delta.ddlambda", s.dim,
                    lambda k: _same_span(kernel(s.laplacian_ddlambda[k]), kernel(s.elliptic_ddlambda[k]))),
        _per_degree("harmonic_characterization.dplus", s.dim,
                    lambda k: _same_span(kernel(s.laplacian_dplus[k]), kernel(triple_dplus(k)))),
        _per_degree("harmonic_characterization.ddlambda", s.dim,
                    lambda k: _same_span(kernel(s.laplacian_ddlambda[k]), kernel(triple_dd(k)))),
    ]


def check_lambda_independence(s: OperatorSuite) -> list[CheckResult]:
    ref = s.with_lambda(1)
    return [
        _per_degree("harmonic_lambda_independent.dplus", s.dim,
                    lambda k: _same_span(kernel(s.laplacian_dplus[k]), kernel(ref.laplacian_dplus[k]))),
        _per_degree("harmonic_lambda_independent.ddlambda", s.dim,
                    lambda k: _same_span(kernel(s.laplacian_ddlambda[k]), kernel(ref.laplacian_ddlambda[k]))),
    ]


def check_triple(s: OperatorSuite) -> list[CheckResult]:
    return [CheckResult(f"triple.{k}", v) for k, v in s.triple.check().items()]


def random_basis_change(dim: int, seed: int = 0) -> list[list[Fraction]]:
    """A random invertible rational matrix: unit lower times unit upper triangular, then permuted."""
    rng = random.Random(seed)

    def entry() -> Fraction:
        return Fraction(rng.randint(-3, 3), rng.randint(1, 3))

    low = [[Fraction(1) if i == j else (entry() if j < i else Fraction(0)) for j in range(dim)] for i in range(dim)]
    up = [[Fraction(rng.choice([1, 2, -1, -3])) if i == j else (entry() if j > i else Fraction(0))
           for j in range(dim)] for i in range(dim)]
    prod = [[sum((low[i][t] * up[t][j] for t in range(dim)), Fraction(0)) for j in range(dim)] for i in range(dim)]
    perm = list(range(dim))
    rng.shuffle(perm)
    return [prod[p] for p in perm]


def dimension_vectors(s: OperatorSuite) -> tuple[list[int], ...]:
    return tuple([sp.dimension for sp in spaces(s, f)] for f in ("dR", "dplus", "ddlambda"))


def check_basis_independence(s: OperatorSuite, seed: int = 0) -> CheckResult:
    """All cohomology dimensions survive a random rational change of coframe."""
    P = random_basis_change(s.dim, seed)
    moved = change_basis(s.model, P)
    other = OperatorSuite(moved, darboux_basis(moved.omega), s.lam)
    alt = OperatorSuite(s.model, darboux_basis(s.model.omega, order=list(range(s.dim, 0, -1))), s.lam)
    ref = dimension_vectors(s)
    ok = dimension_vectors(other) == ref == dimension_vectors(alt)
    return CheckResult("basis_independence", ok, detail="random coframe change and reversed Darboux order")


def is_psd(m: list[list[Fraction]]) -> bool:
    """Exact positive semidefiniteness of a symmetric rational matrix (pivoted Schur complements)."""
    a = [row[:] for row in m]
    while a:
        size = len(a)
        diag = [a[i][i] for i in range(size)]
        if any(x < 0 for x in diag):
            return False
        piv = next((i for i in range(size) if diag[i] > 0), None)
        if piv is None:
            return all(x == 0 for row in a for x in row)
        p = a[piv][piv]
        col = [a[i][piv] for i in range(size)]
        a = [
            [a[i][j] - col[i] * col[j] / p for j in range(size) if j != piv]
            for i in range(size) if i != piv
        ]
    return True


IDENTITY_CHECKS: tuple[Callable[[OperatorSuite], CheckResult | list[CheckResult]], ...] = (
    check_d_squared,
    check_dlambda_squared,
    check_anticommute,
    check_pairing_symmetry,
    check_star_s_involution,
    check_star_g_square,
    check_koszul,
    check_sl2,
    check_adjoints,
    check_star_intertwines,
    check_laplacian_commutes,
)

HARMONIC_CHECKS = (check_kernels, check_lambda_independence, check_laplacians_self_adjoint)


def _collect(s: OperatorSuite, fns) -> list[CheckResult]:
    out: list[CheckResult] = []
    for fn in fns:
        r = fn(s)
        out.extend(r if isinstance(r, list) else [r])
    return out


def identity_checks(s: OperatorSuite) -> list[CheckResult]:
    return _collect(s, IDENTITY_CHECKS)


def harmonic_checks(s: OperatorSuite) -> list[CheckResult]:
    return _collect(s, HARMONIC_CHECKS)


def run_suite(s: OperatorSuite, basis_change: bool = True) -> SuiteResult:
    """Every identity, kernel and cohomology audit for one model at one lambda.

    Hard Lefschetz and Mathieu are verdicts, not identities: a model may fail
    them legitimately. Their agreement is a check.
    """
    checks = check_triple(s) + identity_checks(s) + harmonic_checks(s)
    report = euler_report(s)
    checks += [CheckResult(f"audit.{a.name}" + ("" if a.degree is None else f"[{a.degree}]"), a.passed)
               for a in report.audits]
    if basis_change:
        checks.append(check_basis_independence(s))
    verdicts = {
        "hard_lefschetz": report.hlp.holds,
        "mathieu": report.mathieu.holds,
        "star_duality": all(a.passed for a in report.audits if a.name == "star_duality"),
    }
    return SuiteResult(s.model.name, s.lam, checks, verdicts)
