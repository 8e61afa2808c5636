from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from wvnjacobi.errors import InvalidInput, PoleAtPoint
from wvnjacobi.exact import Poly, RatFunc, format_poly, isolate_real_roots, poly_gcd, poly_real_roots, rf_eval

X = Poly.x()
lam = sp.Symbol("lam")

small_fracs = st.fractions(min_value=-20, max_value=20, max_denominator=12)
polys = st.lists(small_fracs, min_size=0, max_size=6).map(Poly)
nonzero_polys = polys.filter(lambda p: not p.is_zero())


def to_sympy(p: Poly):
    return sum(sp.Rational(c.numerator, c.denominator) * lam**k for k, c in enumerate(p.coeffs))


def test_gcd_examples():
    assert poly_gcd(X**2 - 1, X - 1) == X - 1
    assert poly_gcd(X**2 - 2, X + 3) == Poly.const(1)
    p = (X - 2) ** 2 * (X + 1)
    q = (X - 2) * (X - 5)
    assert poly_gcd(p, q) == X - 2


def test_gcd_both_zero():
    with pytest.raises(InvalidInput):
        poly_gcd(Poly(), Poly())


def test_zero_polynomial_degree_is_sentinel():
    assert Poly().degree is None
    assert Poly([0, 0]).is_zero()
    assert Poly([1, 0, 0]).degree == 0


def test_real_roots_examples():
    assert poly_real_roots(X**2 - 1) == [(-1.0, 1), (1.0, 1)]
    assert poly_real_roots((X**2 - 2) + 2) == [(0.0, 2)]
    assert poly_real_roots(X**3 - X) == [(-1.0, 1), (0.0, 1), (1.0, 1)]
    with pytest.raises(InvalidInput):
        poly_real_roots(Poly())


def test_irrational_roots_bracketed():
    roots = isolate_real_roots(X**2 - 2, Fraction(1, 10**12))
    assert len(roots) == 2
    for r in roots:
        assert r.width <= Fraction(1, 10**12)
        assert r.lo * r.lo <= 2 <= r.hi * r.hi or r.hi * r.hi <= 2 <= r.lo * r.lo
    assert roots[1].value == pytest.approx(2**0.5, abs=1e-12)


def test_rf_eval_examples():
    assert rf_eval(RatFunc(X, 2), Fraction(1)) == Fraction(1, 2)
    with pytest.raises(PoleAtPoint):
        rf_eval(RatFunc(X**2 - 1, X), Fraction(0))
    f = RatFunc(X**2 - 1, X) * Fraction(3, 4)
    assert rf_eval(f, Fraction(2)) == Fraction(9, 8)


def test_format_poly():
    assert format_poly(3 * X**2 - 3) == "3λ²−3"
    assert format_poly(Poly([0, 4])) == "4λ"


@settings(max_examples=200, deadline=None)
@given(nonzero_polys, nonzero_polys)
def test_gcd_divides_both(p, q):
    g = poly_gcd(p, q)
    assert (p % g).is_zero() and (q % g).is_zero()
    assert g.lead == 1
    ref = sp.gcd(sp.Poly(to_sympy(p), lam), sp.Poly(to_sympy(q), lam)).monic()
    assert to_sympy(g).expand() == ref.as_expr().expand()


@settings(max_examples=200, deadline=None)
@given(polys, nonzero_polys, nonzero_polys)
def test_ratfunc_normal_form(n, d, common):
    f = RatFunc(n * common, d * common)
    assert poly_gcd(f.num, f.den) == Poly.const(1) or f.num.is_zero()
    assert f.den.lead > 0
    assert RatFunc(f.num, f.den) == f
    assert f == RatFunc(n, d)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(-6, 6), min_size=1, max_size=5), st.lists(st.integers(-3, 3), max_size=3))
def test_roots_match_sympy(simple_roots, repeated):
    p = Poly.const(1)
    for r in simple_roots + repeated:
        p = p * (X - r)
    p = p * (X**2 + 1)  # no real roots from this factor
    got = poly_real_roots(p)
    ref = sorted(sp.roots(sp.Poly(to_sympy(p), lam), filter="R").items())
    assert [(float(r), m) for r, m in ref] == got
    assert sum(m for _, m in got) <= p.degree


@settings(max_examples=100, deadline=None)
@given(nonzero_polys)
def test_root_brackets_change_sign_on_squarefree_part(p):
    if p.degree == 0:
        return
    sqf = p.exact_div(poly_gcd(p, p.derivative()))
    for r in isolate_real_roots(p, Fraction(1, 10**9)):
        lo, hi = sqf(r.lo), sqf(r.hi)
        assert lo == 0 or hi == 0 or (lo > 0) != (hi > 0)
