from fractions import Fraction

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from sasakiverify.exterior import FrameSpace, ModelForm
from sasakiverify.scalars import QuadScalar

settings.register_profile("ci", max_examples=40, deadline=None)
settings.load_profile("ci")

small_fraction = st.fractions(min_value=-20, max_value=20, max_denominator=12)
quad = st.builds(QuadScalar, small_fraction, small_fraction, small_fraction, small_fraction)
nonzero_quad = quad.filter(bool)


def model_forms(space: FrameSpace, deg: int, max_terms: int = 4):
    """Random ModelForm of a fixed degree with small integer coefficients."""
    h = 2 * space.n
    coeff = st.integers(-3, 3).map(Fraction)

    def idx(k):
        return st.lists(st.integers(0, h - 1), min_size=k, max_size=k, unique=True).map(lambda v: tuple(sorted(v)))

    a0 = st.dictionaries(idx(deg), coeff, max_size=max_terms) if deg <= h else st.just({})
    a1 = st.dictionaries(idx(deg - 1), coeff, max_size=max_terms) if 1 <= deg <= h + 1 else st.just({})
    return st.builds(lambda x, y: ModelForm(space, deg, x, y), a0, a1)


@pytest.fixture(scope="session")
def space():
    return FrameSpace(5, -1)


@pytest.fixture(scope="session")
def flat_exact():
    from sasakiverify.sasaki import flat_model

    return flat_model()
