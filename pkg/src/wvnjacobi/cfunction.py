"""The function ``C(lambda; T) = Re sum_{s=1}^T phi_s conj(phi_{s-1})``.

Numerically it is evaluated from the Floquet solution.  Exactly it is built
as a rational function: writing ``phi_s = A_s + mu B_s`` with rational
``A_s, B_s`` and using ``mu conj(mu) = 1``, ``Re mu = Tr M / 2`` removes all
dependence on ``mu``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bands import ROOT_PRECISION, band_structure
from .errors import DegenerateNormalization, InternalInconsistency, NotElliptic
from .exact import Poly, RatFunc, RootBracket, format_poly, isolate_real_roots
from .monodromy import floquet_solution, monodromy_exact
from .operator import PeriodicJacobi

__all__ = ["CExact", "c_numeric", "c_exact", "c_zeros_in_bands", "c_zero_brackets_in_bands"]


def c_numeric(J: PeriodicJacobi, lam: float, branch: int = 1) -> float:
    data, _ = floquet_solution(J, lam, branch=branch)
    phi = np.append(data.phi, data.mu)  # phi_T = mu phi_0
    return float(np.sum(phi[1:] * phi[:-1].conj()).real)


@dataclass(frozen=True)
class CExact:
    f: RatFunc
    leading_order: int
    leading_coeff: Fraction

    def __call__(self, lam):
        return self.f(lam)

    def __str__(self) -> str:
        return format_c(self.f)


def format_c(f: RatFunc) -> str:
    """``C = (num)/(den)`` with coprime integer coefficients, e.g.
    ``C = (3λ²−3)/(4λ)``."""
    n_int, n_fac = f.num.integer_scaled()
    d_int, d_fac = f.den.integer_scaled()
    ratio = n_fac / d_fac
    num = Poly(n_int).scale(ratio.numerator)
    den = Poly(d_int).scale(ratio.denominator)
    return f"C = ({format_poly(num)})/({format_poly(den)})"


def c_exact(J: PeriodicJacobi) -> CExact:
    M = monodromy_exact(J)
    lam = Poly.x()
    m11, m12 = RatFunc(M.m11), RatFunc(M.m12)
    A = [RatFunc(1), -m11 / m12]
    B = [RatFunc(0), 1 / m12]
    T = J.T
    for s in range(1, T):
        a_s, a_prev, b_s = J.exact_a_at(s), J.exact_a_at(s - 1), J.exact_b_at(s)
        shift = RatFunc(lam - b_s)
        A.append((shift * A[s] - a_prev * A[s - 1]) / a_s)
        B.append((shift * B[s] - a_prev * B[s - 1]) / a_s)
    if not (A[T] == 0 and B[T] == 1):
        raise InternalInconsistency(f"phi_T != mu: A_T = {A[T]}, B_T = {B[T]}")
    half_tr = RatFunc(M.trace()) * Fraction(1, 2)
    C = RatFunc(0)
    for s in range(1, T + 1):
        C = C + A[s] * A[s - 1] + B[s] * B[s - 1] + half_tr * (A[s] * B[s - 1] + A[s - 1] * B[s])
    if C.is_zero():
        raise InternalInconsistency("C vanishes identically")
    expected = Fraction(1, 2) * sum((1 / x for x in J.exact_a), Fraction(0))
    if C.order != 1 or C.leading_coeff != expected:
        raise InternalInconsistency(
            f"C has order {C.order} and leading coefficient {C.leading_coeff}, expected 1 and {expected}"
        )
    return CExact(C, C.order, C.leading_coeff)


def c_zero_brackets_in_bands(J: PeriodicJacobi, precision: Fraction = ROOT_PRECISION) -> list[RootBracket]:
    """Brackets of the zeros of ``C`` strictly inside the elliptic bands."""
    C = c_exact(J)
    bs = band_structure(J)
    out = []
    for r in isolate_real_roots(C.f.num, precision):
        lo, hi = float(r.lo), float(r.hi)
        if any(l < lo and hi < h for l, h in bs.bands):
            out.append(r)
    return out


def c_zeros_in_bands(J: PeriodicJacobi) -> list[float]:
    return [r.value for r in c_zero_brackets_in_bands(J)]


def c_value(J: PeriodicJacobi, lam: float) -> float:
    """``C`` at ``lam``: the Floquet formula on the elliptic set, the rational
    continuation elsewhere when exact data exist, otherwise NaN."""
    try:
        return c_numeric(J, lam)
    except (NotElliptic, DegenerateNormalization):
        if not J.has_exact:
            return math.nan
        f = c_exact(J).f
        d = f.den(float(lam))
        return f.num(float(lam)) / d if d != 0 else math.nan
