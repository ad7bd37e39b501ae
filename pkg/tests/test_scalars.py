import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sasakiverify.scalars import (
    EXACT,
    I,
    CScalar,
    FloatBackend,
    NoRealSolution,
    NotRepresentable,
    QuadScalar,
    format_complex,
    get_backend,
    parse_complex,
    parse_quad,
    qf_arith,
    qf_sqrt_of_rational,
    to_float,
)

from .conftest import nonzero_quad, quad

R2, R3, R6 = QuadScalar(0, 1), QuadScalar(0, 0, 1), QuadScalar(0, 0, 0, 1)


# ---------------------------------------------------------------------------
# field arithmetic
# ---------------------------------------------------------------------------


class TestArithmetic:
    def test_basis_products(self):
        assert R2 * R3 == R6
        assert R2 * R2 == 2
        assert R6 * R6 == 6
        assert R2 * R6 == 2 * R3

    def test_inverse_of_mixed_surd(self):
        x = 3 * R3 + 4 * R2
        assert x.inverse() == (4 * R2 - 3 * R3) / 5
        assert x * x.inverse() == 1

    def test_mu2_rationalises(self):
        mu2 = Fraction(1, 12) * (R3 - R2) / (3 * R3 + 4 * R2)
        assert mu2 == (7 * R6 - 17) / 60
        assert mu2.coefficients == (Fraction(-17, 60), 0, 0, Fraction(7, 60))

    def test_qf_arith_dispatch(self):
        assert qf_arith(R2, R3, "mul") == R6
        assert qf_arith(R6, R3, "div") == R2
        with pytest.raises(ZeroDivisionError):
            qf_arith(R2, QuadScalar(0), "div")
        with pytest.raises(ValueError):
            qf_arith(R2, R3, "pow")

    def test_canonical_form(self):
        x = QuadScalar(Fraction(2, 4), Fraction(-3, 6))
        assert x.a == Fraction(1, 2) and x.b == Fraction(-1, 2)
        assert x == QuadScalar(Fraction(1, 2), Fraction(-1, 2))
        assert hash(x) == hash(QuadScalar(Fraction(1, 2), Fraction(-1, 2)))

    def test_sign_of_near_cancellation(self):
        # 5 sqrt2 - 7 > 0 and 7 sqrt6 - 17 > 0, both barely
        assert (5 * R2 - 7).sign() == 1
        assert (7 * R6 - 17).sign() == 1
        assert (17 - 7 * R6).sign() == -1
        assert QuadScalar(0).sign() == 0

    @given(quad, quad, quad)
    def test_ring_axioms(self, x, y, z):
        assert (x + y) + z == x + (y + z)
        assert x * (y + z) == x * y + x * z
        assert x * y == y * x
        assert (x * y) * z == x * (y * z)

    @given(nonzero_quad)
    def test_inverse(self, x):
        assert x * x.inverse() == 1

    @given(quad, quad)
    def test_order_matches_float(self, x, y):
        if abs(float(x) - float(y)) > 1e-9:
            assert (x < y) == (float(x) < float(y))


# ---------------------------------------------------------------------------
# square roots
# ---------------------------------------------------------------------------


class TestSqrt:
    def test_einstein_lambda(self):
        assert qf_sqrt_of_rational(Fraction(3, 2)) == R6 / 2

    def test_zero(self):
        assert qf_sqrt_of_rational(0) == 0

    def test_not_representable(self):
        with pytest.raises(NotRepresentable, match="not representable"):
            qf_sqrt_of_rational(5)

    def test_negative(self):
        with pytest.raises(NoRealSolution, match="no real solution"):
            qf_sqrt_of_rational(-3)

    @given(st.fractions(min_value=0, max_value=50, max_denominator=20), st.sampled_from([1, 2, 3, 6]))
    def test_squares_back(self, r, k):
        q = r * r * k
        s = qf_sqrt_of_rational(q)
        assert s * s == q
        assert s.sign() >= 0


# ---------------------------------------------------------------------------
# float embedding
# ---------------------------------------------------------------------------


class TestFloat:
    def test_values(self):
        assert math.isclose(float(to_float(R6 / 2)), 1.2247448713915890, rel_tol=1e-15)
        assert math.isclose(float(to_float((7 * R6 - 17) / 60)), 0.0024404699913707, rel_tol=1e-12)
        assert float(to_float(QuadScalar(0))) == 0.0

    def test_cancellation_is_accurate(self):
        # 7 sqrt6 - 17 loses digits in naive double evaluation
        x = (7 * R6 - 17) * 10**6
        exact_digits = float(to_float(x))
        assert math.isclose(exact_digits, 146428.19948224668, rel_tol=1e-15)

    @given(st.lists(quad.filter(lambda q: max(abs(c) for c in q.coefficients) <= 10**4), min_size=1, max_size=8))
    def test_homomorphism(self, xs):
        prod = QuadScalar(1)
        fprod = 1.0
        for x in xs:
            prod = prod * x
            fprod *= float(to_float(x))
        exact = float(to_float(prod))
        assert math.isclose(exact, fprod, rel_tol=1e-12, abs_tol=1e-300) or abs(exact) < 1e-9


# ---------------------------------------------------------------------------
# literals and backends
# ---------------------------------------------------------------------------


class TestLiterals:
    @pytest.mark.parametrize(
        "text, value",
        [
            ("1/2*r6", R6 / 2),
            ("sqrt(3/2)", R6 / 2),
            ("3/4 + 1/3*r6", Fraction(3, 4) + R6 / 3),
            ("-17/60 + 7/60*r6", (7 * R6 - 17) / 60),
            ("r2 - r3", R2 - R3),
            ("5", QuadScalar(5)),
        ],
    )
    def test_parse(self, text, value):
        assert parse_quad(text) == value

    @given(quad)
    def test_round_trip(self, x):
        assert parse_quad(str(x)) == x

    @pytest.mark.parametrize("bad", ["", "1/2*r5", "1 2", "r6 r6", "abc"])
    def test_bad_literals(self, bad):
        with pytest.raises(ValueError):
            parse_quad(bad)

    @given(quad, quad)
    def test_complex_round_trip(self, a, b):
        z = CScalar(a, b)
        assert parse_complex(format_complex(z)) == z


class TestComplex:
    @given(quad, quad)
    def test_conjugation(self, a, b):
        z = CScalar(a, b)
        assert z.conjugate().conjugate() == z
        assert z.abs2() == a * a + b * b
        assert z.abs2().sign() >= 0

    def test_i_squared(self):
        assert I * I == CScalar(-1)

    @given(quad, quad)
    def test_inverse(self, a, b):
        z = CScalar(a, b)
        if z:
            assert z * z.inverse() == CScalar(1)


class TestBackends:
    def test_exact_is_default(self):
        assert get_backend() is EXACT
        assert get_backend("exact").exact

    def test_float_tolerance(self):
        b = get_backend({"float": {"tolerance": 1e-6}})
        assert isinstance(b, FloatBackend) and b.tolerance == 1e-6
        assert b.is_zero(1e-7) and not b.is_zero(1e-5)

    def test_float_complex_of_exact(self):
        b = FloatBackend()
        z = b.complex(CScalar(R2, 1))
        assert math.isclose(z.real, math.sqrt(2)) and z.imag == 1.0
        assert b.complex(R6 / 2, 1) == complex(float(R6 / 2), 1.0)

    def test_float_sqrt_negative(self):
        with pytest.raises(NoRealSolution):
            FloatBackend().sqrt_rational(-1)
