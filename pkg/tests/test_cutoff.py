import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symplectic_hodge.cutoff import CutoffError, CutoffFamily, certify_bounds, derivative_mismatch, evaluate, psi

mp.mp.dps = 80


def _psi_mp(y):
    f = lambda t: mp.exp(-1 / t) if t > 0 else mp.mpf(0)
    return f(y) / (f(y) + f(1 - y))


def _c1_mp(y):
    # -a'/(eps sqrt a) = 2 psi'(y) in the variable y = 2 - eps x
    return 2 * mp.diff(_psi_mp, y)


def _c2_mp(y):
    # |a''| / eps^2 = |(psi^2)''(y)|
    return abs(mp.diff(lambda t: _psi_mp(t) ** 2, y, 2))


def test_oracle_constants():
    assert _c1_mp(mp.mpf("0.5")) == pytest.approx(4, rel=1e-20)
    # C2 is attained where (psi^2)''' vanishes
    third = lambda t: mp.diff(lambda u: _psi_mp(u) ** 2, t, 3)
    y = mp.findroot(third, (mp.mpf("0.75"), mp.mpf("0.85")), solver="bisect", verify=False)
    assert _c2_mp(y) == pytest.approx(18.081411367256770753, rel=1e-15)


C1_TRUE, C2_TRUE = 4.0, 18.081411367256770753


def test_psi_endpoints_and_middle():
    p, dp, ddp = psi(np.array([-1.0, 0.0, 0.5, 1.0, 2.0]))
    assert list(p) == [0.0, 0.0, 0.5, 1.0, 1.0]
    assert dp[0] == dp[1] == dp[3] == dp[4] == 0.0
    assert dp[2] == pytest.approx(2.0)
    assert ddp[2] == pytest.approx(0.0, abs=1e-12)


@settings(max_examples=60)
@given(st.floats(0.01, 0.99))
def test_psi_matches_mpmath(y):
    p, dp, ddp = psi(np.array([y]))
    assert p[0] == pytest.approx(float(_psi_mp(mp.mpf(y))), rel=1e-12, abs=1e-300)
    assert dp[0] == pytest.approx(float(mp.diff(_psi_mp, mp.mpf(y))), rel=1e-9, abs=1e-300)
    assert ddp[0] == pytest.approx(float(mp.diff(_psi_mp, mp.mpf(y), 2)), rel=1e-8, abs=1e-250)


@pytest.mark.parametrize("eps", [1.0, 0.1, 0.01, 1e-3])
def test_certificate(eps):
    cert = certify_bounds(eps)
    assert cert.passed
    assert cert.C1 == pytest.approx(C1_TRUE, rel=1e-6)
    assert cert.C2 == pytest.approx(C2_TRUE, rel=1e-6)
    assert cert.C1 <= C1_TRUE + 1e-9 and cert.C2 <= C2_TRUE + 1e-9


def test_constants_independent_of_eps():
    certs = [certify_bounds(e) for e in (1.0, 0.1, 0.01, 0.001)]
    for name in ("C1", "C2"):
        vals = [getattr(c, name) for c in certs]
        assert max(vals) <= 1.05 * min(vals)


@settings(max_examples=30)
@given(st.floats(1e-3, 10.0), st.floats(0.0, 1.0))
def test_plateaus_exact(eps, t):
    fam = CutoffFamily(eps)
    a, a1, a2 = fam.evaluate(np.array([t / eps, 2 / eps + t / eps]))
    assert (a[0], a1[0], a2[0]) == (1.0, 0.0, 0.0)
    assert (a[1], a1[1], a2[1]) == (0.0, 0.0, 0.0)


@settings(max_examples=30)
@given(st.floats(1e-3, 10.0), st.floats(0.0, 3.0))
def test_bounds_pointwise(eps, t):
    a, a1, a2 = evaluate(eps, np.array([t / eps]))
    assert 0 <= a[0] <= 1 and a1[0] <= 0
    assert -a1[0] <= eps * C1_TRUE * np.sqrt(a[0]) * (1 + 1e-9) + 1e-300
    assert abs(a2[0]) <= C2_TRUE * eps**2 * (1 + 1e-9)


@pytest.mark.parametrize("eps", [1.0, 0.1, 0.01])
def test_finite_differences(eps):
    e1, e2 = derivative_mismatch(eps)
    assert e1 <= 1e-6 and e2 <= 1e-6


def test_rejections():
    with pytest.raises(CutoffError, match="positive"):
        CutoffFamily(0.0)
    with pytest.raises(CutoffError, match="positive"):
        certify_bounds(-1.0)
    with pytest.raises(CutoffError, match="coarse"):
        certify_bounds(0.1, grid=999)
    with pytest.raises(CutoffError, match="x >= 0"):
        evaluate(0.1, np.array([-1e-9]))


def test_certificate_dict():
    d = certify_bounds(0.1).as_dict()
    assert d["pass"] is True and d["grid"] == 10_000 and set(d) >= {"C1", "C2", "epsilon"}
