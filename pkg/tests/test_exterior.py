import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sasakiverify.exterior import (
    FrameSpace,
    FrameVector,
    ModelForm,
    flat,
    hodge,
    hodge_base,
    inner,
    interior,
    model_d,
    sharp,
    volume,
    wedge,
)
from sasakiverify.scalars import QuadScalar

from .conftest import model_forms

SP = FrameSpace(5, -1)
SP_R = FrameSpace(5, 1)
LAM = QuadScalar(0, 0, 0, Fraction(1, 2))


def monomial(space, I):
    """e^I with xi (index 2n) allowed as the last slot."""
    xi = space.xi
    if xi in I:
        J = tuple(i for i in I if i != xi)
        return ModelForm(space, len(I), {}, {J: (-1) ** len(J)})
    return ModelForm(space, len(I), {tuple(I): 1})


def omega_k(k, space=SP):
    return ModelForm.omega_power(space, k)


# ---------------------------------------------------------------------------
# frame space
# ---------------------------------------------------------------------------


class TestFrameSpace:
    def test_dimensions(self):
        assert SP.dim == 11 and SP.xi == 10
        assert SP.metric(10, 10) == -1 and SP_R.metric(10, 10) == 1
        assert all(SP.metric(i, i) == 1 for i in range(10))

    def test_complex_structure(self):
        assert SP.omega(0, 5) == 1 and SP.omega(5, 0) == -1
        assert SP.index("xi") == 10 and SP.index(1) == 0

    def test_eta_of_xi(self):
        xi = SP.basis_vector("xi")
        assert xi.eta() == 1
        assert xi.dot(xi) == -1

    def test_bad_epsilon(self):
        with pytest.raises(ValueError):
            FrameSpace(5, 0)


# ---------------------------------------------------------------------------
# wedge
# ---------------------------------------------------------------------------


class TestWedge:
    def test_omega_squared(self):
        w = ModelForm.omega(SP)
        w2 = wedge(w, w)
        assert w2 == omega_k(2)
        assert inner(w2, w2) == 40

    def test_eta_squares_to_zero(self):
        eta = ModelForm.eta(SP)
        assert wedge(wedge(eta, omega_k(5)), eta).is_zero()
        assert wedge(eta, eta).is_zero()

    def test_flux_square(self):
        F = omega_k(2).scale(LAM)
        assert wedge(F, F) == omega_k(4).scale(Fraction(3, 2))

    def test_degree_overflow_is_zero(self):
        top = wedge(ModelForm.eta(SP), ModelForm.volume_h(SP))
        assert wedge(top, ModelForm.omega(SP)).is_zero()

    @given(model_forms(SP, 2), model_forms(SP, 3), model_forms(SP, 1))
    def test_associative_and_graded(self, a, b, c):
        assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))
        assert wedge(a, b) == wedge(b, a).scale((-1) ** (a.deg * b.deg))
        assert wedge(b, c) == wedge(c, b).scale(-1)


# ---------------------------------------------------------------------------
# interior product
# ---------------------------------------------------------------------------


vectors = st.lists(st.integers(-2, 2), min_size=11, max_size=11).map(lambda v: FrameVector(SP, tuple(v)))


class TestInterior:
    def test_xi_kills_flux(self):
        F = omega_k(2).scale(LAM)
        assert interior(SP.basis_vector("xi"), F).is_zero()

    def test_e1_into_omega(self):
        assert interior(SP.basis_vector(1), ModelForm.omega(SP)) == ModelForm.coframe(SP, 5)

    def test_xi_into_eta_part(self):
        a1 = {(0, 5): Fraction(3)}
        form = ModelForm(SP, 3, {}, a1)
        assert interior(SP.basis_vector("xi"), form) == ModelForm(SP, 2, a1)

    def test_horizontal_flux_norm(self):
        F = omega_k(2).scale(LAM)
        iF = interior(SP.basis_vector(3), F)
        assert inner(iF, iF) == 24
        assert inner(F, F) == 60

    @given(vectors, model_forms(SP, 3), model_forms(SP, 2))
    def test_leibniz(self, X, a, b):
        lhs = interior(X, wedge(a, b))
        rhs = wedge(interior(X, a), b) + wedge(a, interior(X, b)).scale((-1) ** a.deg)
        assert lhs == rhs

    @given(vectors, model_forms(SP, 4))
    def test_nilpotent(self, X, a):
        assert interior(X, interior(X, a)).is_zero()


# ---------------------------------------------------------------------------
# Hodge star
# ---------------------------------------------------------------------------


class TestHodge:
    def test_star_omega2(self):
        expected = ModelForm(SP, 7, {}, omega_k(3).scale(Fraction(-1, 3)).alpha0)
        assert hodge(omega_k(2)) == expected

    def test_star_one(self):
        assert hodge(ModelForm.constant(SP, 1)) == volume(SP)
        assert volume(SP) == ModelForm(SP, 11, {}, {tuple(range(10)): -1})

    @pytest.mark.parametrize("space", [SP, SP_R], ids=["lorentzian", "riemannian"])
    def test_pairing_exhaustive(self, space):
        # each monomial goes to a monomial on the complement, so the diagonal decides
        vol = volume(space)
        for k in range(space.dim + 1):
            for I in itertools.combinations(range(space.dim), k):
                a = monomial(space, I)
                s = hodge(a)
                assert len(s.alpha0) + len(s.alpha1) == 1
                assert wedge(a, s) == vol.scale(inner(a, a))

    @pytest.mark.parametrize("space, sign", [(SP, -1), (SP_R, 1)], ids=["lorentzian", "riemannian"])
    def test_double_star(self, space, sign):
        for k in range(space.dim + 1):
            for I in itertools.islice(itertools.combinations(range(space.dim), k), 40):
                a = monomial(space, I)
                assert hodge(hodge(a)) == a.scale(sign)

    def test_pullback_relation(self):
        # *(pi* b) = -(-1)^p eta ^ pi*(*_h b)
        for p in range(11):
            for I in itertools.islice(itertools.combinations(range(10), p), 30):
                beta = {I: 1}
                lhs = hodge(ModelForm(SP, p, beta))
                rhs = ModelForm(SP, 11 - p, {}, {J: -((-1) ** p) * c for J, c in hodge_base(SP, beta, p).items()})
                assert lhs == rhs

    @given(model_forms(SP, 3), model_forms(SP, 3))
    def test_symmetric_pairing(self, a, b):
        assert wedge(a, hodge(b)) == wedge(b, hodge(a))


# ---------------------------------------------------------------------------
# differential
# ---------------------------------------------------------------------------


class TestDifferential:
    def test_d_eta(self):
        assert model_d(ModelForm.eta(SP)) == ModelForm.omega(SP).scale(-2)

    def test_d_star_flux(self):
        F = omega_k(2).scale(LAM)
        assert model_d(hodge(F)) == omega_k(4).scale(LAM * Fraction(2, 3))

    def test_basic_forms_closed(self):
        assert model_d(omega_k(4)).is_zero()

    @given(model_forms(SP, 3))
    def test_d_squared(self, a):
        assert model_d(model_d(a)).is_zero()

    @given(model_forms(SP, 2), model_forms(SP, 3))
    def test_leibniz(self, a, b):
        assert model_d(wedge(a, b)) == wedge(model_d(a), b) + wedge(a, model_d(b)).scale((-1) ** a.deg)


# ---------------------------------------------------------------------------
# musical isomorphisms and serialisation
# ---------------------------------------------------------------------------


class TestMusical:
    def test_xi_flat(self):
        assert flat(SP.basis_vector("xi")) == ModelForm.eta(SP).scale(-1)
        assert flat(SP_R.basis_vector("xi")) == ModelForm.eta(SP_R)

    def test_e1_flat(self):
        assert flat(SP.basis_vector(1)) == ModelForm.coframe(SP, 0)

    def test_phi_e1_flat(self):
        # Phi(e1) = eps J e1 = -e6
        phi_e1 = SP.basis_vector(6).scale(-1)
        assert flat(phi_e1) == ModelForm.coframe(SP, 5).scale(-1)

    @given(vectors)
    def test_round_trip(self, X):
        assert sharp(flat(X)) == X
        Y = SP.basis_vector(2)
        assert interior(Y, flat(X)) == ModelForm.constant(SP, X.dot(Y))


class TestJson:
    @given(model_forms(SP, 4))
    def test_round_trip(self, a):
        assert ModelForm.from_json(SP, a.to_json()) == a

    def test_literal_shape(self):
        data = ModelForm.omega(SP).scale(QuadScalar(0, 1)).to_json()
        assert data["deg"] == 2
        assert {"idx": [1, 6], "coeff": "r2"} in data["terms"]
