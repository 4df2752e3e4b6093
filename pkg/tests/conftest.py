from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from symplectic_hodge import catalog
from symplectic_hodge.exterior import Form, basis
from symplectic_hodge.operators import OperatorSuite

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")

CATALOG_IDS = catalog.ids()
LAMBDAS = (Fraction(1, 2), Fraction(1), Fraction(2))

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def forms(draw, dim: int, k: int | None = None):
    if k is None:
        k = draw(st.integers(0, dim))
    coeffs = draw(st.lists(rationals, min_size=len(basis(dim, k)), max_size=len(basis(dim, k))))
    return Form.from_vector(dim, k, coeffs)


@pytest.fixture(scope="session")
def suites():
    """One lambda = 1 suite per catalog model, shared across tests."""
    return {i: OperatorSuite(catalog.get(i).model) for i in CATALOG_IDS}


@pytest.fixture(scope="session")
def kt(suites):
    return suites["kodaira-thurston"]
