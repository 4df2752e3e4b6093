from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import forms, rationals
from symplectic_hodge.exterior import (
    Form,
    as_scalar,
    basis,
    complement_sign,
    contract,
    dim_forms,
    format_form,
    sort_sign,
    wedge,
    wedge_power,
)


def e(dim, *idx, c=1):
    return Form.basis_form(dim, idx, c)


class TestWedge:
    def test_basis_product(self):
        assert wedge(e(4, 1), e(4, 2)) == e(4, 1, 2)

    def test_antisymmetry(self):
        assert wedge(e(4, 2), e(4, 1)) == e(4, 1, 2) * -1

    def test_repeated_index_vanishes(self):
        assert wedge(e(4, 1, 2), e(4, 1, 3)).is_zero()

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            wedge(e(4, 1), e(6, 1))

    @given(st.data(), st.integers(0, 6), st.integers(0, 6))
    def test_graded_commutative(self, data, p, q):
        a = data.draw(forms(6, p))
        b = data.draw(forms(6, q))
        assert wedge(a, b) == wedge(b, a) * (-1) ** (p * q)

    @given(st.data())
    def test_associative_and_bilinear(self, data):
        a, b, c = (data.draw(forms(4)) for _ in range(3))
        s = data.draw(rationals)
        assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))
        assert wedge(a * s + c, b) == wedge(a, b) * s + wedge(c, b)

    def test_matches_brute_force(self):
        a = Form(5, {(1,): 2, (3,): Fraction(1, 2)})
        b = Form(5, {(2, 4): -1, (1, 5): 3})
        ref = oracles.wedge(dict(a.items()), dict(b.items()))
        assert dict(wedge(a, b).items()) == ref

    def test_top_power_of_standard_omega(self):
        omega = e(4, 1, 2) + e(4, 3, 4)
        assert wedge_power(omega, 2) == e(4, 1, 2, 3, 4) * 2


class TestContract:
    def test_first_slot(self):
        assert contract(1, e(4, 1, 2)) == e(4, 2)

    def test_absent_index(self):
        assert contract(3, e(4, 1, 2)).is_zero()

    def test_sign_from_position(self):
        assert contract(2, e(4, 1, 2)) == e(4, 1) * -1

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            contract(5, e(4, 1))

    @given(st.data(), st.integers(1, 6), st.integers(0, 6))
    def test_antiderivation(self, data, v, p):
        a = data.draw(forms(6, p))
        b = data.draw(forms(6))
        lhs = contract(v, wedge(a, b))
        rhs = wedge(contract(v, a), b) + wedge(a, contract(v, b)) * (-1) ** p
        assert lhs == rhs


class TestComplementSign:
    @pytest.mark.parametrize("index, n2, expected", [
        ((1, 2), 4, ((3, 4), 1)),
        ((2, 3), 4, ((1, 4), 1)),
        ((), 4, ((1, 2, 3, 4), 1)),
    ])
    def test_examples(self, index, n2, expected):
        assert complement_sign(index, n2) == expected

    @pytest.mark.parametrize("n2", [2, 4, 6])
    def test_against_permutation_parity(self, n2):
        for k in range(n2 + 1):
            for idx in combinations(range(1, n2 + 1), k):
                assert complement_sign(idx, n2) == oracles.complement(idx, n2)

    def test_wedge_with_complement_is_signed_top(self):
        for idx in basis(6, 3):
            comp, s = complement_sign(idx, 6)
            assert wedge(e(6, *idx), e(6, *comp)) == e(6, 1, 2, 3, 4, 5, 6) * s


class TestScalarsAndForms:
    @given(rationals, rationals)
    def test_round_trip(self, x, y):
        assert (x + y) - y == x

    def test_parse_strings(self):
        assert as_scalar("3/6") == Fraction(1, 2)
        assert as_scalar(" -2 ") == -2

    @pytest.mark.parametrize("bad", [0.5, True, None])
    def test_refuses_inexact(self, bad):
        with pytest.raises(TypeError):
            as_scalar(bad)

    def test_zero_coefficients_pruned(self):
        f = Form(4, {(1,): 1, (2,): 0}) + Form(4, {(1,): -1})
        assert f.is_zero() and dict(f.items()) == {}

    def test_invalid_index(self):
        with pytest.raises(ValueError):
            Form(4, {(2, 1): 1})
        with pytest.raises(ValueError):
            Form(4, {(5,): 1})

    def test_sort_sign(self):
        assert sort_sign((3, 1, 2)) == (1, (1, 2, 3))
        assert sort_sign((2, 1)) == (-1, (1, 2))
        assert sort_sign((1, 1))[0] == 0

    def test_degree_and_parts(self):
        f = e(4, 1) + e(4, 2, 3)
        assert f.degree is None and f.degrees() == {1, 2}
        assert f.part(2) == e(4, 2, 3)
        assert f.vector(1) == [1, 0, 0, 0]
        assert dim_forms(4, 2) == 6 and dim_forms(4, 5) == 0

    def test_format(self):
        f = e(4, 1, 2) - e(4, 3, c=Fraction(1, 2))
        assert format_form(f) == "-1/2 e3 + e1^e2"
        assert format_form(Form(4)) == "0"
        assert str(e(4, 2) * -1) == "-e2"

    def test_immutable_hashable(self):
        assert hash(e(4, 1)) == hash(e(4, 1))
        assert {e(4, 1): 1}[Form(4, {(1,): 1})] == 1
