from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import rationals
from symplectic_hodge.exterior import Form
from symplectic_hodge.linalg import (
    GradedOperator,
    entries,
    exterior_power,
    eye,
    from_rows,
    hstack,
    image,
    inverse,
    is_zero,
    kernel,
    minor_det,
    qq,
    rank,
    same,
    solve_in_span,
    zeros,
)


def matrices(rows=st.integers(1, 5), cols=st.integers(1, 5)):
    return st.tuples(rows, cols).flatmap(
        lambda rc: st.lists(st.lists(rationals, min_size=rc[1], max_size=rc[1]), min_size=rc[0], max_size=rc[0])
    )


@given(matrices())
def test_rank_matches_gaussian_oracle(rows):
    assert rank(from_rows(rows)) == oracles.rank(rows)


@given(matrices())
def test_kernel_and_image_dimensions(rows):
    m = from_rows(rows)
    k = kernel(m)
    assert is_zero(m * k)
    assert k.shape[1] == len(rows[0]) - rank(m) == rank(k)
    im = image(m)
    assert im.shape[1] == rank(m)
    assert solve_in_span(im, m) and solve_in_span(m, im)


@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(rationals, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_minor_det_matches_leibniz(rows):
    n = len(rows)
    assert minor_det(rows, range(n), range(n)) == oracles.det(rows)


@given(st.data(), st.integers(0, 4))
def test_exterior_power_is_multiplicative(data, k):
    sq = st.lists(st.lists(rationals, min_size=4, max_size=4), min_size=4, max_size=4)
    a, b = data.draw(sq), data.draw(sq)
    ab = oracles.matmul(a, b)
    assert same(exterior_power(ab, k), exterior_power(a, k) * exterior_power(b, k))


def test_kernel_is_reduced_echelon_basis():
    m = from_rows([[1, 2, 0], [0, 0, 1]])
    assert entries(kernel(m)) == [[-2], [1], [0]]


def test_inverse_round_trip():
    m = from_rows([[2, 1], [1, 1]])
    assert same(m * inverse(m), eye(2))
    assert inverse(zeros(0, 0)).shape == (0, 0)


def test_empty_shapes():
    assert rank(zeros(0, 3)) == 0
    assert kernel(zeros(0, 3)).shape == (3, 3)
    assert image(zeros(2, 0)).shape == (2, 0)
    assert hstack(zeros(2, 0), zeros(2, 0)).shape == (2, 0)
    assert solve_in_span(zeros(2, 0), zeros(2, 0))


def test_same_ignores_storage_format():
    sparse_zero = eye(2) * qq(0)
    assert same(sparse_zero, zeros(2, 2))
    assert not same(zeros(2, 2), zeros(2, 3))


class TestGradedOperator:
    def test_missing_blocks_are_zero(self):
        op = GradedOperator(4, 1, {})
        assert op[0].shape == (4, 1) and op.is_zero()
        assert op[4].shape == (0, 1)

    def test_out_of_range_degree_is_empty(self):
        op = GradedOperator.identity(4)
        assert op[-1].shape == (0, 0) and op[5].shape == (0, 0)

    def test_shape_checked(self):
        with pytest.raises(ValueError, match="degree 0"):
            GradedOperator(2, 0, {0: zeros(2, 2)})

    def test_composition_and_shift(self):
        up = GradedOperator(2, 1, {0: from_rows([[1], [0]])})    # 1 -> e1
        down = GradedOperator(2, -1, {1: from_rows([[1, 0]])})   # e1 -> 1
        comp = down @ up
        assert comp.shift == 0
        assert entries(comp[0]) == [[1]]
        assert entries(comp[1]) == [[0, 0], [0, 0]]
        assert comp.equals(comp + GradedOperator.zero(2, 0))
        with pytest.raises(ValueError):
            up + down

    def test_signed_and_scaled(self):
        i = GradedOperator.identity(2)
        s = i.signed(lambda k: (-1) ** k)
        assert entries(s[1]) == [[-1, 0], [0, -1]] and entries(s[2]) == [[1]]
        assert entries(i.scaled(Fraction(1, 3))[0]) == [[Fraction(1, 3)]]

    def test_apply(self):
        op = GradedOperator.build(2, 0, lambda k: eye(2) * qq(3) if k == 1 else eye(1))
        f = Form(2, {(): 1, (1,): 2, (1, 2): 5})
        assert op.apply(f) == Form(2, {(): 1, (1,): 6, (1, 2): 5})
