"""Numerical checks that ``lambda`` is an eigenvalue of ``J + diag(q)``.

Finite sections are symmetric tridiagonal; their eigenvalues are found by
Sturm-sequence counting and bisection, eigenvectors by inverse iteration.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidInput
from .monodromy import floquet_solution, wronskians
from .operator import PeriodicJacobi

__all__ = [
    "TridiagSection",
    "VerificationReport",
    "recurrence_residual",
    "sturm_count",
    "finite_section_eigs",
    "nearest_eigenvalue",
    "inverse_iteration",
    "section_residual",
    "decay_exponent",
    "verify_sequences",
    "embedded_eigen_check",
]

EIG_TOL = 1e-12


@dataclass(frozen=True)
class TridiagSection:
    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.diag, dtype=float)
        e = np.asarray(self.offdiag, dtype=float)
        if d.ndim != 1 or e.shape != (max(len(d) - 1, 0),):
            raise InvalidInput("offdiag must have exactly one entry fewer than diag")
        if np.any(e <= 0):
            raise InvalidInput("off-diagonal entries must be positive")
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def size(self) -> int:
        return len(self.diag)

    @classmethod
    def from_operator(cls, J: PeriodicJacobi, q: Sequence[float]) -> "TridiagSection":
        N = len(q)
        n = np.arange(1, N + 1)
        b = np.array(J.b)[(n - 1) % J.T]
        a = np.array(J.a)[(n[:-1] - 1) % J.T]
        return cls(b + np.asarray(q, dtype=float), a)

    def matvec(self, x: np.ndarray) -> np.ndarray:
        y = self.diag * x
        y[:-1] += self.offdiag * x[1:]
        y[1:] += self.offdiag * x[:-1]
        return y


def recurrence_residual(J: PeriodicJacobi, u: Sequence, q: Sequence, lam) -> tuple[float, float]:
    """Max interior residual over ``2 <= n <= N-1`` and the first-row residual
    of ``a_{n-1} u_{n-1} + (b_n + q_n - lam) u_n + a_n u_{n+1}``.

    Works elementwise on floats, complex numbers or Fractions; with exact
    inputs and an exact operator the residuals are exact.
    """
    u, q = list(u), list(q)
    if len(u) != len(q):
        raise InvalidInput(f"length mismatch: {len(u)} values of u vs {len(q)} of q")
    if len(u) < 3:
        raise InvalidInput("need at least three sites")
    if J.has_exact:
        a = lambda n: J.exact_a_at(n)  # noqa: E731
        b = lambda n: J.exact_b_at(n)  # noqa: E731
    else:
        a, b = J.a_at, J.b_at
    worst = 0
    for n in range(2, len(u)):
        r = abs(a(n - 1) * u[n - 2] + (b(n) + q[n - 1] - lam) * u[n - 1] + a(n) * u[n])
        if r > worst:
            worst = r
    first = abs((b(1) + q[0] - lam) * u[0] + a(1) * u[1])
    return worst, first


def _pivmin(e2) -> float:
    return float(np.finfo(float).tiny) * max(1.0, float(np.max(e2, initial=0.0)))


def _count_scalar(d: Sequence[float], e2: Sequence[float], x: float, pivmin: float) -> int:
    count = 0
    piv = d[0] - x
    for i in range(len(d)):
        if i:
            piv = d[i] - x - e2[i - 1] / piv
        # an exactly vanishing pivot is nudged negative and counted
        if piv <= pivmin:
            piv = min(piv, -pivmin)
            count += 1
    return count


def sturm_count(sec: TridiagSection, x) -> np.ndarray | int:
    """Number of eigenvalues below ``x`` (scalar or array).

    Counts negative pivots of the LDL^T factorisation of ``T - x I``.
    """
    e2 = sec.offdiag**2
    pivmin = _pivmin(e2)
    if np.ndim(x) == 0:
        return _count_scalar(sec.diag.tolist(), e2.tolist(), float(x), pivmin)
    x = np.asarray(x, dtype=float)
    d = sec.diag
    count = np.zeros(x.shape, dtype=np.int64)
    piv = d[0] - x
    for i in range(len(d)):
        if i:
            piv = d[i] - x - e2[i - 1] / piv
        neg = piv <= pivmin
        piv = np.where(neg, np.minimum(piv, -pivmin), piv)
        count += neg
    return count


def _kth_eigenvalues(sec: TridiagSection, ks: np.ndarray, lo: float, hi: float, tol: float) -> np.ndarray:
    """Bisection for eigenvalues of indices ``ks`` (0-based, ascending) in ``[lo, hi]``."""
    ks = np.asarray(ks)
    left = np.full(ks.shape, lo, dtype=float)
    right = np.full(ks.shape, hi, dtype=float)
    steps = max(1, math.ceil(math.log2(max(hi - lo, tol) / tol)) + 1)
    for _ in range(steps):
        mid = 0.5 * (left + right)
        if len(ks) <= 4:
            below = np.array([sturm_count(sec, float(m)) for m in mid])
        else:
            below = sturm_count(sec, mid)
        # eigenvalue k lies below mid iff more than k eigenvalues are below mid
        right = np.where(below > ks, mid, right)
        left = np.where(below > ks, left, mid)
    return 0.5 * (left + right)


def finite_section_eigs(sec: TridiagSection, window: tuple[float, float], tol: float = EIG_TOL) -> np.ndarray:
    """Sorted eigenvalues in ``[lo, hi)`` to absolute accuracy ``tol``."""
    lo, hi = window
    if not lo < hi:
        raise InvalidInput("window must satisfy lo < hi")
    c_lo, c_hi = sturm_count(sec, lo), sturm_count(sec, hi)
    ks = np.arange(c_lo, c_hi)
    if ks.size == 0:
        return np.empty(0)
    return np.sort(_kth_eigenvalues(sec, ks, lo, hi, tol))


def nearest_eigenvalue(sec: TridiagSection, lam: float, radius: float = 0.5, tol: float = EIG_TOL) -> float:
    """Eigenvalue closest to ``lam`` within ``lam +- radius`` (NaN if none)."""
    c = sturm_count(sec, lam)
    c_lo, c_hi = sturm_count(sec, lam - radius), sturm_count(sec, lam + radius)
    cands = []
    if c > c_lo:
        cands.append(_kth_eigenvalues(sec, np.array([c - 1]), lam - radius, lam, tol)[0])
    if c_hi > c:
        cands.append(_kth_eigenvalues(sec, np.array([c]), lam, lam + radius, tol)[0])
    if not cands:
        return math.nan
    return min(cands, key=lambda x: abs(x - lam))


def _tridiag_solve(sec: TridiagSection, sigma: float, rhs: np.ndarray) -> np.ndarray:
    """Solve ``(T - sigma I) x = rhs`` by LU with partial pivoting."""
    n = sec.size
    d = (sec.diag - sigma).tolist()
    e = sec.offdiag.tolist()
    # rows held as (diag, first super, second super) after pivoting
    main = d[:]
    sup1 = e + [0.0]
    sup2 = [0.0] * n
    sub = e[:]
    b = rhs.astype(float).tolist()
    tiny = 1e-300
    for i in range(n - 1):
        if abs(sub[i]) > abs(main[i]):
            # swap rows i and i+1
            main[i], sub[i] = sub[i], main[i]
            row_next_main = main[i + 1]
            row_next_sup1 = sup1[i + 1]
            main[i + 1] = sup1[i]
            sup1[i], sup2[i] = row_next_main, row_next_sup1
            sup1[i + 1] = 0.0
            b[i], b[i + 1] = b[i + 1], b[i]
            # after the swap, sub[i] holds the pivot row's old diagonal
            m = sub[i] / main[i]
            main[i + 1] -= m * sup1[i]
            sup1[i + 1] -= m * sup2[i]
            b[i + 1] -= m * b[i]
        else:
            piv = main[i] if main[i] != 0 else tiny
            m = sub[i] / piv
            main[i] = piv
            main[i + 1] -= m * sup1[i]
            b[i + 1] -= m * b[i]
    if main[n - 1] == 0:
        main[n - 1] = tiny
    x = [0.0] * n
    for i in range(n - 1, -1, -1):
        s = b[i]
        if i + 1 < n:
            s -= sup1[i] * x[i + 1]
        if i + 2 < n:
            s -= sup2[i] * x[i + 2]
        x[i] = s / main[i]
    return np.array(x)


def inverse_iteration(sec: TridiagSection, eigenvalue: float, iterations: int = 3, seed: int = 0) -> np.ndarray:
    """Unit eigenvector for a known eigenvalue."""
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(sec.size)
    x /= np.linalg.norm(x)
    shift = eigenvalue + 1e-14 * max(1.0, abs(eigenvalue))
    for _ in range(iterations):
        x = _tridiag_solve(sec, shift, x)
        x /= np.linalg.norm(x)
    return x


def section_residual(sec: TridiagSection, u: np.ndarray, lam: float) -> np.ndarray:
    """``(T_N - lam) u``; for a Dirichlet cut only the last row survives."""
    return sec.matvec(np.asarray(u, dtype=float)) - lam * np.asarray(u, dtype=float)


def decay_exponent(u: np.ndarray, block: int, start: int | None = None) -> float:
    """Slope of log(block max |u_n|) against log(n) over ``n in [N/10, N]``.

    ``block`` should cover one oscillation of ``u`` so the envelope is free
    of zeros of the sine factor.
    """
    u = np.abs(np.asarray(u, dtype=float))
    N = len(u)
    start = N // 10 if start is None else start
    xs, ys = [], []
    for lo in range(start, N - block + 1, block):
        seg = u[lo : lo + block]
        j = int(np.argmax(seg))
        if seg[j] > 0:
            xs.append(math.log(lo + j + 1))
            ys.append(math.log(seg[j]))
    if len(xs) < 2:
        return math.nan
    slope, _ = np.polyfit(xs, ys, 1)
    return float(slope)


@dataclass(frozen=True)
class VerificationReport:
    max_interior_residual: float
    first_row_residual: float
    spectral_distance: float
    eigvec_correlation: float
    decay_exponent_fit: float
    wronskian_drift: float
    residual_bound: float
    nearest_eigenvalue: float

    def to_json(self) -> dict:
        return asdict(self)


def _oscillation_block(J: PeriodicJacobi, theta: float) -> int:
    """Whole periods covering one oscillation of ``sin(n theta / T)``."""
    return J.T * max(1, math.ceil(2 * math.pi / theta))


def verify_sequences(J: PeriodicJacobi, lam: float, u: Sequence[float], q: Sequence[float]) -> VerificationReport:
    """Report on the section of size ``N = len(u)`` of ``J + diag(q)``."""
    u = np.asarray(u, dtype=float)
    q = np.asarray(q, dtype=float)
    interior, first = recurrence_residual(J, u, q, lam)
    sec = TridiagSection.from_operator(J, q)
    bound = float(np.linalg.norm(section_residual(sec, u, lam)) / np.linalg.norm(u))
    ev = nearest_eigenvalue(sec, lam)
    distance = abs(ev - lam)
    half = len(u) // 2
    if math.isnan(ev):
        corr = math.nan
    else:
        v = inverse_iteration(sec, ev)
        corr = float(np.dot(u[:half], v[:half]) / (np.linalg.norm(u[:half]) * np.linalg.norm(v[:half])))
        corr = abs(corr)
    data, _ = floquet_solution(J, lam)
    w = wronskians(J, data)
    drift = float(np.max(np.abs(w - w[0])) / abs(w[0]))
    slope = decay_exponent(u, _oscillation_block(J, data.theta))
    return VerificationReport(float(interior), float(first), float(distance), corr, slope, drift, bound, float(ev))


def embedded_eigen_check(J: PeriodicJacobi, params) -> VerificationReport:
    from .wvn import wvn_construct

    res = wvn_construct(J, params)
    return verify_sequences(J, params.lam, res.u, res.q)
