"""Band structure of a periodic Jacobi matrix and splitting of touching bands."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import NothingToSplit, SplitSearchFailed
from .exact import Poly, isolate_real_roots
from .monodromy import monodromy_exact, monodromy_numeric
from .operator import PeriodicJacobi

__all__ = ["ParabolicPoint", "BandStructure", "SplitResult", "band_structure", "split_degeneracy"]

ROOT_PRECISION = Fraction(1, 10**13)
NUMERIC_TOL = 1e-9


@dataclass(frozen=True)
class ParabolicPoint:
    value: float
    sign: int  # +1 for Tr M = 2, -1 for Tr M = -2
    multiplicity: int
    lo: float
    hi: float


@dataclass(frozen=True)
class BandStructure:
    parabolic_plus: tuple[ParabolicPoint, ...]
    parabolic_minus: tuple[ParabolicPoint, ...]
    bands: tuple[tuple[float, float], ...]
    degenerate: bool
    exact: bool = True
    touching: tuple[float, ...] = field(default=())

    @property
    def parabolic(self) -> list[ParabolicPoint]:
        return sorted(self.parabolic_plus + self.parabolic_minus, key=lambda p: p.value)

    def degeneracy_excess(self) -> int:
        """Total multiplicity above one plus the number of touching points."""
        extra = sum(p.multiplicity - 1 for p in self.parabolic)
        return extra + len(self.touching)

    def degenerate_points(self) -> list[float]:
        pts = [p.value for p in self.parabolic if p.multiplicity > 1]
        pts += [x for x in self.touching if x not in pts]
        return sorted(pts)

    def contains(self, lam: float, closed: bool = False) -> bool:
        for lo, hi in self.bands:
            if (lo <= lam <= hi) if closed else (lo < lam < hi):
                return True
        return False

    def to_json(self) -> dict:
        return {
            "bands": [[lo, hi] for lo, hi in self.bands],
            "parabolic": [
                {"lambda": p.value, "sign": p.sign, "mult": p.multiplicity} for p in self.parabolic
            ],
            "degenerate": self.degenerate,
        }


def _bands_from_points(points: list[ParabolicPoint], is_elliptic) -> tuple[list, list]:
    """Elliptic components between consecutive distinct parabolic points."""
    bands = []
    for left, right in zip(points, points[1:]):
        if is_elliptic(left, right):
            bands.append((left.value, right.value))
    touching = [bands[i][1] for i in range(len(bands) - 1) if bands[i][1] == bands[i + 1][0]]
    return bands, touching


def _exact_structure(J: PeriodicJacobi) -> BandStructure:
    tr = monodromy_exact(J).trace()
    brackets: dict[float, tuple[Fraction, Fraction]] = {}

    def points(p: Poly, sign: int) -> list[ParabolicPoint]:
        out = []
        for r in isolate_real_roots(p, ROOT_PRECISION):
            brackets[r.value] = (r.lo, r.hi)
            out.append(ParabolicPoint(r.value, sign, r.multiplicity, float(r.lo), float(r.hi)))
        return out

    plus = points(tr - 2, 1)
    minus = points(tr + 2, -1)
    ordered = sorted(plus + minus, key=lambda p: p.value)

    def is_elliptic(left: ParabolicPoint, right: ParabolicPoint) -> bool:
        # rational point strictly between the two brackets
        mid = (brackets[left.value][1] + brackets[right.value][0]) / 2
        return abs(tr(mid)) < 2

    bands, touching = _bands_from_points(ordered, is_elliptic)
    degenerate = any(p.multiplicity > 1 for p in ordered) or bool(touching)
    return BandStructure(tuple(plus), tuple(minus), tuple(bands), degenerate, True, tuple(touching))


def _numeric_structure(J: PeriodicJacobi, tol: float = NUMERIC_TOL) -> BandStructure:
    lo, hi = J.spectral_bounds()
    pad = 1e-3 * (hi - lo) + 1e-6
    grid = np.linspace(lo - pad, hi + pad, 64 * J.T + 1)
    trace = lambda x: float(np.trace(monodromy_numeric(J, float(x))))  # noqa: E731
    tr = np.array([trace(x) for x in grid])
    found: list[ParabolicPoint] = []
    for sign in (1, -1):
        g = tr - 2 * sign
        for i in range(len(grid) - 1):
            if g[i] == 0:
                found.append(ParabolicPoint(float(grid[i]), sign, 1, float(grid[i]), float(grid[i])))
            elif g[i] * g[i + 1] < 0:
                x = brentq(lambda t: trace(t) - 2 * sign, grid[i], grid[i + 1], xtol=1e-15)
                found.append(ParabolicPoint(x, sign, 1, x, x))
    found.sort(key=lambda p: p.value)
    # tangential contacts |Tr| = 2 inside an elliptic stretch split it in two
    extra: list[ParabolicPoint] = []
    for left, right in zip(found, found[1:]):
        mid = 0.5 * (left.value + right.value)
        if abs(trace(mid)) >= 2:
            continue
        xs = np.linspace(left.value, right.value, 257)[1:-1]
        vals = np.abs([trace(x) for x in xs])
        j = int(np.argmax(vals))
        a = xs[max(j - 1, 0)]
        b = xs[min(j + 1, len(xs) - 1)]
        res = minimize_scalar(lambda t: -abs(trace(t)), bounds=(a, b), method="bounded",
                              options={"xatol": 1e-13})
        if -res.fun >= 2 - tol:
            sign = 1 if trace(res.x) > 0 else -1
            extra.append(ParabolicPoint(float(res.x), sign, 2, float(res.x), float(res.x)))
    points = sorted(found + extra, key=lambda p: p.value)
    bands, touching = _bands_from_points(points, lambda l, r: abs(trace(0.5 * (l.value + r.value))) < 2)
    plus = tuple(p for p in points if p.sign == 1)
    minus = tuple(p for p in points if p.sign == -1)
    degenerate = bool(extra) or bool(touching)
    return BandStructure(plus, minus, tuple(bands), degenerate, False, tuple(touching))


def band_structure(J: PeriodicJacobi) -> BandStructure:
    """Parabolic points and elliptic bands.

    Uses exact root isolation of ``Tr M -+ 2`` when rational entries are
    available, otherwise a sampled sign-change search with bisection.
    Two bands sharing an endpoint count as degenerate.
    """
    if J.has_exact:
        return _exact_structure(J)
    return _numeric_structure(J)


@dataclass(frozen=True)
class SplitResult:
    epsilon: Fraction | float
    eta: Fraction | float
    structure_after: BandStructure
    operator: PeriodicJacobi
    modes: tuple[str, ...] = ()


def _needs_eta(J: PeriodicJacobi, lam0: float, tol: float = 1e-9) -> bool:
    """True when ``p_3(lam0) = p_3'(lam0) = 0`` for ``p_3 = m_21``."""
    if J.has_exact:
        p3 = monodromy_exact(J).m21
        val, der = abs(p3(lam0)), abs(p3.derivative()(lam0))
    else:
        h = 1e-6
        val = abs(monodromy_numeric(J, lam0)[1, 0])
        der = abs(monodromy_numeric(J, lam0 + h)[1, 0] - monodromy_numeric(J, lam0 - h)[1, 0]) / (2 * h)
    return val + der <= tol


def split_degeneracy(J: PeriodicJacobi, bound: float | Fraction, max_shrink: int = 64) -> SplitResult:
    """Find ``(epsilon, eta)`` with ``|epsilon|, |eta| <= bound`` making every
    parabolic point of ``b_1 -> b_1 + epsilon``, ``a_1 -> a_1 + eta`` simple.

    Each round picks a degenerate point; if ``|p_3| + |p_3'|`` is nonzero there
    it perturbs ``b_1`` only, else ``a_1`` only.  Trial sizes shrink
    geometrically from ``bound``; a trial is kept when the total degeneracy
    drops, and rounds repeat until none is left.
    """
    bs = band_structure(J)
    if not bs.degenerate:
        raise NothingToSplit("operator already has simple parabolic points and separated bands")
    exact = J.has_exact
    if exact:
        bound = Fraction(str(bound)) if isinstance(bound, float) else Fraction(bound)
    if bound <= 0:
        raise SplitSearchFailed("bound must be positive")
    eps, eta = (Fraction(0), Fraction(0)) if exact else (0.0, 0.0)
    current, structure = J, bs
    modes: list[str] = []
    for _ in range(4 * J.T + 1):
        if not structure.degenerate:
            return SplitResult(eps, eta, structure, current, tuple(modes))
        lam0 = structure.degenerate_points()[0]
        use_eta = _needs_eta(current, lam0)
        excess = structure.degeneracy_excess()
        accepted = False
        for j in range(max_shrink):
            t = bound / 2**j
            base = eta if use_eta else eps
            for cand in (base + t, base - t):
                if abs(cand) > bound or (use_eta and J.a[0] + float(cand) <= 0):
                    continue
                trial = J.perturbed(epsilon=eps, eta=cand) if use_eta else J.perturbed(epsilon=cand, eta=eta)
                tb = band_structure(trial)
                if tb.degeneracy_excess() < excess:
                    if use_eta:
                        eta = cand
                    else:
                        eps = cand
                    current, structure, accepted = trial, tb, True
                    modes.append("eta" if use_eta else "epsilon")
                    break
            if accepted:
                break
        if not accepted:
            raise SplitSearchFailed(
                f"no {'eta' if use_eta else 'epsilon'} within {max_shrink} halvings of {bound} "
                f"splits the degenerate point near {lam0:.6g}"
            )
    if structure.degenerate:
        raise SplitSearchFailed("degeneracy persists after the maximal number of rounds")
    return SplitResult(eps, eta, structure, current, tuple(modes))
