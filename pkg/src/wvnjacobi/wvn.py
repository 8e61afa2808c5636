"""Wigner-von Neumann construction of an eigenvector ``u`` and a Coulomb-type
diagonal potential ``q`` embedding ``lambda`` into a band of a periodic
Jacobi matrix with zero diagonal.

With the Floquet solution ``phi`` at ``lambda``,

    omega_n = sum_{m>n} c_m m^{-alpha} Im(phi_m) Im(phi_{m-1}),
    u_n     = omega_n Im(phi_n),
    q_n     = (-a_{n-1} Im(phi_{n-1})^2 c_n n^{-alpha}
               + a_n Im(phi_{n+1})^2 c_{n+1} (n+1)^{-alpha}) / omega_n,

and ``u_1, q_1, q_2`` are fixed so that the first two rows hold as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .cfunction import c_numeric, c_zero_brackets_in_bands
from .errors import (
    DegenerateStart,
    EmbeddingObstruction,
    InvalidInput,
    TailBudgetExceeded,
    UnsupportedDiagonal,
)
from .monodromy import FloquetData, floquet_solution, floquet_values
from .operator import PeriodicJacobi

__all__ = [
    "WvnParams",
    "Boundary",
    "WvnResult",
    "OmegaSequence",
    "QAsymptotics",
    "euler_maclaurin_tail",
    "omega_sequence",
    "complete_boundary",
    "wvn_construct",
    "q_asymptotic_params",
    "schrodinger_fixture",
]

MAX_CUTOFF = 400_000_000
_CHUNK = 1 << 20


@dataclass(frozen=True)
class WvnParams:
    lam: float
    alpha: float = 2.0
    N: int = 10_000
    tail_tol: float = 1e-8
    c_overrides: dict[int, float] | None = None
    q1: float | None = None
    q2: float | None = None

    def __post_init__(self):
        if not self.alpha > 1.5:
            raise InvalidInput(f"alpha = {self.alpha} must exceed 3/2 for an l^2 eigenvector")
        if int(self.N) != self.N or self.N < 3:
            raise InvalidInput(f"horizon N = {self.N} must be an integer >= 3")
        if not self.tail_tol > 0:
            raise InvalidInput("tail_tol must be positive")
        if not math.isfinite(self.lam):
            raise InvalidInput("lambda must be finite")


def euler_maclaurin_tail(alpha: float, M: int, terms: int = 4) -> float:
    """``sum_{m=M+1}^inf m^{-alpha}`` by Euler-Maclaurin at ``x = M + 1``."""
    x = float(M + 1)
    total = x ** (1 - alpha) / (alpha - 1) + 0.5 * x**-alpha
    # B_2, B_4, B_6, B_8
    bern = (1 / 6, -1 / 30, 1 / 42, -1 / 30)
    rising = alpha  # alpha (alpha+1) ... (alpha+2j-2)
    power = x ** (-alpha - 1)
    for j in range(1, terms + 1):
        total += bern[j - 1] / math.factorial(2 * j) * rising * power
        rising *= (alpha + 2 * j - 1) * (alpha + 2 * j)
        power /= x * x
    return total


def _check_setup(J: PeriodicJacobi, params: WvnParams) -> tuple[FloquetData, float]:
    if not J.zero_diagonal:
        raise UnsupportedDiagonal("the construction is implemented for b = 0 only")
    data, _ = floquet_solution(J, params.lam)
    C = c_numeric(J, params.lam)
    scale = float(np.sum(np.abs(data.phi) ** 2))
    if abs(C) <= 1e-12 * scale:
        raise EmbeddingObstruction(f"C(lambda) = {C:.3e} vanishes at lambda = {params.lam}")
    if J.has_exact:
        for r in c_zero_brackets_in_bands(J):
            w = float(r.hi - r.lo)
            if float(r.lo) - w <= params.lam <= float(r.hi) + w:
                raise EmbeddingObstruction(f"lambda = {params.lam} is a zero of C (bracket [{r.lo}, {r.hi}])")
    return data, C


def _tail_constant(data: FloquetData) -> float:
    """Bound on partial sums of ``Im phi_m Im phi_{m-1} - C/(2T)``."""
    T = data.T
    mods = np.abs(data.phi)
    s2 = float(np.max(mods * np.roll(mods, 1)))
    return T * s2 * (2 + 1 / (2 * abs(math.sin(data.theta))))


class OmegaSequence(NamedTuple):
    """``omega[n]`` is ``omega_n`` for ``n = 0..N+1``."""

    omega: np.ndarray
    cutoff: int
    est_tail_error: float
    increments: np.ndarray  # increments[n] = c_n n^-alpha Im phi_n Im phi_{n-1}


def _increments(data: FloquetData, m: np.ndarray, alpha: float) -> np.ndarray:
    im = floquet_values(data, m).imag
    im_prev = floquet_values(data, m - 1).imag
    return m.astype(float) ** -alpha * im * im_prev


def _omega(J, params: WvnParams, data: FloquetData, C: float, c: dict[int, float]) -> OmegaSequence:
    N, alpha, T = params.N, params.alpha, J.T
    B = _tail_constant(data)
    M = max(4 * N, math.ceil((B / params.tail_tol) ** (1 / alpha)))
    if M > MAX_CUTOFF:
        raise TailBudgetExceeded(f"cutoff {M} needed for tail_tol = {params.tail_tol} exceeds {MAX_CUTOFF}")
    if any(m > N + 1 for m in c):
        raise InvalidInput("c_m overrides must lie within the horizon")
    anchor = C / (2 * T) * euler_maclaurin_tail(alpha, M)
    est = B * (M + 1) ** -alpha
    # omega_{N+1} = omega_M + sum_{m=N+2}^{M} d_m
    far = 0.0
    hi = M
    while hi >= N + 2:
        lo = max(N + 2, hi - _CHUNK + 1)
        far += float(np.sum(_increments(data, np.arange(lo, hi + 1), alpha)))
        hi = lo - 1
    n = np.arange(0, N + 2)
    d = np.zeros(N + 2)
    d[1:] = _increments(data, n[1:], alpha)
    for m, cm in c.items():
        d[m] *= cm
    # sequential fill: omega_{n-1} = omega_n + d_n
    seq = np.concatenate(([anchor + far], d[N + 1 : 0 : -1]))
    omega = np.add.accumulate(seq)[::-1].copy()
    return OmegaSequence(omega, M, est, d)


def omega_sequence(J: PeriodicJacobi, params: WvnParams) -> OmegaSequence:
    """Weighted tail sums ``omega_n`` for ``n = 0..N+1``.

    The sum is cut at ``M``; the mean part of the remainder,
    ``C/(2T) sum_{m>M} m^{-alpha}``, is added analytically and the
    oscillating part is bounded by Abel summation (``est_tail_error``).
    Below ``M`` the values are filled by ``omega_{n-1} = omega_n + d_n``.
    """
    data, C = _check_setup(J, params)
    return _omega(J, params, data, C, dict(params.c_overrides or {}))


@dataclass(frozen=True)
class Boundary:
    u1: float
    q1: float
    q2: float
    case_tag: str  # "U2Nonzero" or "U2Zero"


def complete_boundary(
    J: PeriodicJacobi, lam: float, u2: float, u3: float, q1: float | None = None, q2: float | None = None
) -> Boundary:
    """Choose ``u_1, q_1, q_2`` so rows one and two of ``(J + Q - lam) u = 0`` hold.

    With ``u_2 != 0`` the free parameter is ``q_1`` (default ``lam + 1``);
    with ``u_2 = 0`` it is ``q_2`` (default 0).
    """
    a1, a2 = J.a_at(1), J.a_at(2)
    if u2 != 0:
        q1 = lam + 1.0 if q1 is None else float(q1)
        if q1 == lam:
            raise InvalidInput("q1 must differ from lambda when u_2 != 0")
        u1 = -a1 * u2 / (q1 - lam)
        q2v = lam - (a1 * u1 + a2 * u3) / u2
        return Boundary(float(u1), q1, float(q2v), "U2Nonzero")
    if u3 == 0:
        raise DegenerateStart("u_2 = u_3 = 0 cannot come from a nonzero solution")
    u1 = -a2 * u3 / a1
    return Boundary(float(u1), float(lam), 0.0 if q2 is None else float(q2), "U2Zero")


@dataclass(frozen=True)
class WvnResult:
    """Sequences for ``n = 1..N`` (index ``n - 1``) plus run metadata."""

    lam: float
    alpha: float
    C: float
    theta: float
    omega: np.ndarray
    u: np.ndarray
    q: np.ndarray
    u_next: float  # u_{N+1}, for the truncation residual
    cutoff: int
    est_tail_error: float
    boundary: Boundary
    c_multipliers: dict[int, float] = field(default_factory=dict)
    repairs: int = 0

    @property
    def N(self) -> int:
        return len(self.u)

    def metadata(self) -> dict:
        return {
            "lambda": self.lam,
            "alpha": self.alpha,
            "N": self.N,
            "C": self.C,
            "theta": self.theta,
            "tail_cutoff": self.cutoff,
            "est_tail_error": self.est_tail_error,
            "boundary": {
                "u1": self.boundary.u1,
                "q1": self.boundary.q1,
                "q2": self.boundary.q2,
                "case_tag": self.boundary.case_tag,
            },
            "c_multipliers": {str(k): v for k, v in sorted(self.c_multipliers.items())},
            "repairs": self.repairs,
        }


def wvn_construct(J: PeriodicJacobi, params: WvnParams) -> WvnResult:
    """Build ``u`` and ``q`` so that ``lam`` is an eigenvalue of ``J + diag(q)``."""
    data, C = _check_setup(J, params)
    N, alpha = params.N, params.alpha
    c = {int(k): float(v) for k, v in (params.c_overrides or {}).items()}
    repairs = 0
    while True:
        seq = _omega(J, params, data, C, c)
        zeros = np.flatnonzero(seq.omega[1 : N + 1] == 0.0)
        if zeros.size == 0:
            break
        n_bad = int(zeros[0]) + 1
        if repairs >= N or c.get(n_bad + 1, 1.0) != 1.0:
            raise EmbeddingObstruction(f"omega_{n_bad} = 0 persists after repairs")
        c[n_bad + 1] = 2.0
        repairs += 1
    omega, d = seq.omega, seq.increments
    n = np.arange(0, N + 2)
    im = floquet_values(data, n).imag
    u_full = omega * im
    a_prev = np.array([J.a_at(k - 1) for k in range(J.T)])[n % J.T]
    a_cur = np.array([J.a_at(k) for k in range(J.T)])[n % J.T]
    q = np.zeros(N + 1)
    k = np.arange(3, N + 1)
    cn = np.array([c.get(int(m), 1.0) for m in k])
    cn1 = np.array([c.get(int(m) + 1, 1.0) for m in k])
    q[3:] = (
        -a_prev[k] * im[k - 1] ** 2 * cn * k.astype(float) ** -alpha
        + a_cur[k] * im[k + 1] ** 2 * cn1 * (k + 1.0) ** -alpha
    ) / omega[k]
    bd = complete_boundary(J, params.lam, u_full[2], u_full[3], params.q1, params.q2)
    u_full[1] = bd.u1
    q[1], q[2] = bd.q1, bd.q2
    return WvnResult(
        lam=float(params.lam),
        alpha=float(alpha),
        C=C,
        theta=data.theta,
        omega=omega[1 : N + 1].copy(),
        u=u_full[1 : N + 1].copy(),
        q=q[1:].copy(),
        u_next=float(u_full[N + 1]),
        cutoff=seq.cutoff,
        est_tail_error=seq.est_tail_error,
        boundary=bd,
        c_multipliers=c,
        repairs=repairs,
    )


@dataclass(frozen=True)
class QAsymptotics:
    """Leading terms per residue ``s`` of ``n = T(k-1) + s``:

    ``n q_n ~ rho_s sin(2 n theta / T + zeta_s) + delta_s`` and
    ``n^{alpha-1} u_n ~ eta_tilde_s sin(n theta / T + zeta_tilde_s)``.
    """

    rho: np.ndarray
    zeta: np.ndarray
    delta: np.ndarray
    eta_tilde: np.ndarray
    zeta_tilde: np.ndarray
    theta: float
    C: float

    def to_json(self) -> dict:
        return {
            key: [float(x) for x in getattr(self, key)]
            for key in ("rho", "zeta", "delta", "eta_tilde", "zeta_tilde")
        } | {"theta": self.theta, "C": self.C}


def q_asymptotic_params(J: PeriodicJacobi, lam: float, alpha: float) -> QAsymptotics:
    params = WvnParams(lam, alpha)
    data, C = _check_setup(J, params)
    T, theta = J.T, data.theta
    F = 2 * T * (alpha - 1) / C
    eta, gamma, phase = data.eta, data.gamma, data.phase
    rho, zeta, delta = np.empty(T), np.empty(T), np.empty(T)
    for s in range(T):
        sm, sp = (s - 1) % T, (s + 1) % T
        # n-1 and n+1 may fall into the neighbouring period
        shift_m = -2 * theta if s == 0 else 0.0
        shift_p = 2 * theta if s == T - 1 else 0.0
        a_prev, a_cur = J.a_at(s - 1), J.a_at(s)
        Z = F * (
            a_cur * eta[sp] * np.exp(1j * (phase[sp] + shift_p))
            - a_prev * eta[sm] * np.exp(1j * (phase[sm] + shift_m))
        )
        rho[s] = abs(Z)
        zeta[s] = np.angle(Z) - 2 * s * theta / T
        delta[s] = F * (-gamma[sm] * a_prev + gamma[sp] * a_cur)
    mods = np.abs(data.phi)
    eta_tilde = C * mods / (2 * (alpha - 1) * T)
    zeta_tilde = np.angle(data.phi) - np.arange(T) * theta / T
    return QAsymptotics(rho, zeta, delta, eta_tilde, zeta_tilde, theta, C)


def schrodinger_fixture(n_max: int = 10_000) -> tuple[list[Fraction], list[Fraction]]:
    """Explicit eigenvector/potential pair embedding ``0`` for ``a = 1``, ``b = 0``:
    ``u_n = (-1)^{floor(n/2)} / n``, ``q_1 = 1/2``, ``q_n = 2n(-1)^n/(n^2-1)``.

    Lists are indexed by ``n - 1`` and run to ``n = n_max + 1`` so the
    recurrence can be checked at ``n = n_max``.
    """
    u = [Fraction((-1) ** (n // 2), n) for n in range(1, n_max + 2)]
    q = [Fraction(1, 2)] + [Fraction(2 * n * (-1) ** n, n * n - 1) for n in range(2, n_max + 2)]
    return u, q
