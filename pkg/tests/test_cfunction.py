import random
from fractions import Fraction

import numpy as np
import pytest

from conftest import random_operator, random_rationals
from wvnjacobi import band_structure, c_exact, c_numeric, c_zeros_in_bands, make_operator
from wvnjacobi.cfunction import c_value, format_c
from wvnjacobi.errors import ExactUnavailable, NotElliptic
from wvnjacobi.exact import Poly, RatFunc, rf_eval

X = Poly.x()


def closed_form_t1(a):
    return RatFunc(X, 2 * a[0])


def closed_form_t2(a):
    a1, a2 = a
    return RatFunc((a1 + a2) * (X * X - (a1 - a2) ** 2), 2 * a1 * a2 * X)


def closed_form_t3(a):
    s = sum(1 / x for x in a)
    outer = RatFunc(X * s, 2 * (X * X - a[0] ** 2))
    return outer * RatFunc(X * X - sum(x * x for x in a) + 2 * sum(a) / s)


def test_numeric_examples():
    assert c_numeric(make_operator([1]), 1.0) == pytest.approx(0.5)
    assert c_numeric(make_operator([1]), 0.0) == pytest.approx(0.0, abs=1e-15)
    assert c_numeric(make_operator([1, 2]), 2.0) == pytest.approx(1.125)
    with pytest.raises(NotElliptic):
        c_numeric(make_operator([1, 2]), 0.0)


def test_exact_examples():
    assert c_exact(make_operator([1])).f == RatFunc(X, 2)
    c2 = c_exact(make_operator([1, 2]))
    assert c2.f == RatFunc(X * X - 1, X) * Fraction(3, 4)
    assert str(c2) == "C = (3λ²−3)/(4λ)"
    assert c_exact(make_operator([1, 1, 1])).f == RatFunc(X * 3, 2)
    assert rf_eval(c2.f, Fraction(2)) == Fraction(9, 8)
    with pytest.raises(ExactUnavailable):
        c_exact(make_operator([1.0, 2.0]))


def test_format_clears_denominators():
    assert format_c(RatFunc(X, 2)) == "C = (λ)/(2)"


@pytest.mark.parametrize("T,form", [(1, closed_form_t1), (2, closed_form_t2), (3, closed_form_t3)])
def test_closed_forms(T, form):
    rng = random.Random(100 + T)
    for _ in range(10):
        a = random_rationals(rng, T)
        assert c_exact(make_operator(a)).f == form(a)


def test_order_and_leading_coefficient(rng):
    for _ in range(50):
        J = random_operator(rng, rng.randint(1, 6))
        C = c_exact(J)
        assert C.f.num.degree - C.f.den.degree == 1 == C.leading_order
        assert C.leading_coeff == Fraction(1, 2) * sum(1 / x for x in J.exact_a)
        assert not C.f.is_zero()


def test_exact_numeric_agreement(rng):
    for T in range(1, 7):
        J = random_operator(rng, T)
        C = c_exact(J)
        bands = band_structure(J).bands
        for _ in range(50):
            lo, hi = bands[rng.randrange(len(bands))]
            t = Fraction(rng.randint(1, 999), 1000)
            lam = Fraction(lo) + (Fraction(hi) - Fraction(lo)) * t
            assert float(rf_eval(C.f, lam)) == pytest.approx(c_numeric(J, float(lam)), abs=1e-9)


def test_branch_invariance(rng):
    for T in range(1, 7):
        J = random_operator(rng, T)
        for lo, hi in band_structure(J).bands:
            lam = lo + 0.37 * (hi - lo)
            assert c_numeric(J, lam, branch=-1) == pytest.approx(c_numeric(J, lam), abs=1e-12)


def test_zeros_in_bands_examples():
    assert c_zeros_in_bands(make_operator([1])) == [0.0]
    assert c_zeros_in_bands(make_operator([1, 2])) == []
    assert c_zeros_in_bands(make_operator([1, 1, 1])) == [0.0]


def test_zeros_lie_in_open_bands(rng):
    for T in range(1, 7):
        J = random_operator(rng, T)
        bs = band_structure(J)
        C = c_exact(J)
        for z in c_zeros_in_bands(J):
            assert bs.contains(z)
            assert abs(float(C.f.num(z))) < 1e-8 * max(1.0, float(max(map(abs, C.f.num.coeffs))))


def test_c_value_continuation():
    J = make_operator([1, 2])
    assert c_value(J, 2.0) == pytest.approx(1.125)
    assert c_value(J, 0.5) == pytest.approx(0.75 * (0.25 - 1) / 0.5)
    assert np.isnan(c_value(J, 0.0))
    assert np.isnan(c_value(make_operator([1.0, 2.0]), 0.5))
