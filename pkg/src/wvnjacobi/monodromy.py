"""Transfer and monodromy matrices, point classification and the Floquet
solution of the periodic three-term recurrence

    a_{n-1} u_{n-1} + b_n u_n + a_n u_{n+1} = lambda u_n.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .errors import DegenerateNormalization, ExactUnavailable, InternalInconsistency, NotElliptic
from .exact import Poly
from .operator import PeriodicJacobi

__all__ = [
    "PolyMat2",
    "PointTag",
    "PointClass",
    "FloquetData",
    "transfer_matrix",
    "transfer_matrix_exact",
    "monodromy_numeric",
    "monodromy_exact",
    "trace_poly",
    "classify_point",
    "quasimomentum",
    "floquet_solution",
    "floquet_values",
    "wronskians",
]

TOL_PARABOLIC = 1e-9


def transfer_matrix(J: PeriodicJacobi, i: int, lam) -> np.ndarray:
    """``B_i(lam) = [[0, 1], [-a_{i-1}/a_i, (lam - b_i)/a_i]]`` with ``a_0 = a_T``."""
    ai = J.a_at(i)
    dtype = complex if isinstance(lam, complex) else float
    return np.array([[0.0, 1.0], [-J.a_at(i - 1) / ai, (lam - J.b_at(i)) / ai]], dtype=dtype)


def monodromy_numeric(J: PeriodicJacobi, lam) -> np.ndarray:
    """``M(lam) = B_T(lam) ... B_1(lam)``."""
    if isinstance(lam, complex) and lam.imag == 0:
        lam = lam.real
    M = np.eye(2, dtype=complex if isinstance(lam, complex) else float)
    for i in range(1, J.T + 1):
        M = transfer_matrix(J, i, lam) @ M
    return M


@dataclass(frozen=True)
class PolyMat2:
    m11: Poly
    m12: Poly
    m21: Poly
    m22: Poly

    def __matmul__(self, other: "PolyMat2") -> "PolyMat2":
        return PolyMat2(
            self.m11 * other.m11 + self.m12 * other.m21,
            self.m11 * other.m12 + self.m12 * other.m22,
            self.m21 * other.m11 + self.m22 * other.m21,
            self.m21 * other.m12 + self.m22 * other.m22,
        )

    def det(self) -> Poly:
        return self.m11 * self.m22 - self.m12 * self.m21

    def trace(self) -> Poly:
        return self.m11 + self.m22

    def __call__(self, x) -> np.ndarray:
        if isinstance(x, (int, Fraction)):
            return [[self.m11(x), self.m12(x)], [self.m21(x), self.m22(x)]]
        return np.array([[self.m11(x), self.m12(x)], [self.m21(x), self.m22(x)]])


def _require_exact(J: PeriodicJacobi) -> None:
    if not J.has_exact:
        raise ExactUnavailable("operator was not given with exact rational entries")


def transfer_matrix_exact(J: PeriodicJacobi, i: int) -> PolyMat2:
    _require_exact(J)
    ai = J.exact_a_at(i)
    return PolyMat2(
        Poly.const(0),
        Poly.const(1),
        Poly.const(-J.exact_a_at(i - 1) / ai),
        Poly((-J.exact_b_at(i) / ai, 1 / ai)),
    )


def _check_monodromy_structure(J: PeriodicJacobi, M: PolyMat2) -> None:
    T = J.T
    a = J.exact_a
    prod_all = math.prod(a, start=Fraction(1))
    prod_head = math.prod(a[: T - 1], start=Fraction(1))

    def expect(cond: bool, what: str) -> None:
        if not cond:
            raise InternalInconsistency(f"monodromy structure violated: {what}")

    expect(M.det() == Poly.const(1), "det != 1")
    expect(M.m22.degree == T and M.m22.lead == 1 / prod_all, "m22 leading term")
    expect((M.m12.degree or 0) <= T - 1 and M.m12.coeff(T - 1) == 1 / prod_head, "m12 leading term")
    expect((M.m21.degree or 0) <= T - 1 and M.m21.coeff(T - 1) == -1 / prod_head, "m21 leading term")
    if T >= 2:
        expect(
            (M.m11.degree or 0) <= T - 2 and M.m11.coeff(T - 2) == -a[T - 1] / prod_head,
            "m11 leading term",
        )


def monodromy_exact(J: PeriodicJacobi) -> PolyMat2:
    """Monodromy matrix with polynomial entries in ``lambda``.

    The degree and leading-coefficient pattern of the entries and the
    identity ``det M = 1`` are checked before returning.
    """
    _require_exact(J)
    M = PolyMat2(Poly.const(1), Poly(), Poly(), Poly.const(1))
    for i in range(1, J.T + 1):
        M = transfer_matrix_exact(J, i) @ M
    _check_monodromy_structure(J, M)
    return M


def trace_poly(J: PeriodicJacobi) -> Poly:
    return monodromy_exact(J).trace()


class PointTag(str, Enum):
    ELLIPTIC = "Elliptic"
    HYPERBOLIC = "Hyperbolic"
    PARABOLIC = "Parabolic"


@dataclass(frozen=True)
class PointClass:
    tag: PointTag
    trace: complex
    mu: complex
    mu_partner: complex

    @property
    def eigenvalues(self) -> tuple[complex, complex]:
        return self.mu, self.mu_partner


def _monodromy_eigenvalues(tr: complex) -> tuple[complex, complex]:
    """Roots of ``z^2 - tr z + 1``, larger modulus first (``det M = 1``)."""
    disc = cmath.sqrt(tr * tr - 4)
    z1, z2 = (tr + disc) / 2, (tr - disc) / 2
    big = z1 if abs(z1) >= abs(z2) else z2
    return big, 1 / big


def classify_point(J: PeriodicJacobi, lam, tol_parabolic: float = TOL_PARABOLIC) -> PointClass:
    """Elliptic / hyperbolic / parabolic type of ``lam`` from ``Tr M(lam)``.

    Non-real points are always hyperbolic; ``mu`` is the eigenvalue of
    modulus <= 1 there and the ``Im mu > 0`` eigenvalue on the elliptic set.
    """
    lam = complex(lam)
    if lam.imag != 0:
        M = monodromy_numeric(J, lam)
        tr = complex(np.trace(M))
        big, small = _monodromy_eigenvalues(tr)
        return PointClass(PointTag.HYPERBOLIC, tr, small, big)
    tr = float(np.trace(monodromy_numeric(J, lam.real)))
    gap = abs(tr) - 2
    if abs(gap) <= tol_parabolic:
        mu = complex(math.copysign(1.0, tr))
        return PointClass(PointTag.PARABOLIC, complex(tr), mu, mu)
    if gap < 0:
        theta = math.acos(tr / 2)
        mu = cmath.exp(1j * theta)
        return PointClass(PointTag.ELLIPTIC, complex(tr), mu, mu.conjugate())
    big, small = _monodromy_eigenvalues(complex(tr))
    return PointClass(PointTag.HYPERBOLIC, complex(tr), small, big)


def quasimomentum(J: PeriodicJacobi, lam: float) -> float:
    """``theta = arccos(Tr M / 2)`` in ``(0, pi)`` for elliptic ``lam``."""
    pc = classify_point(J, lam)
    if pc.tag is not PointTag.ELLIPTIC:
        raise NotElliptic(f"lambda = {lam} is {pc.tag.value} (Tr M = {pc.trace.real:.17g})")
    return math.acos(pc.trace.real / 2)


@dataclass(frozen=True)
class FloquetData:
    """Floquet solution ``phi_n = phi_s e^{i(k-1)theta}`` at an elliptic point.

    ``phi`` holds the period cell ``phi_0..phi_{T-1}`` (``phi_0 = 1``) and
    ``phi_T = mu``.  The oscillation parameters describe
    ``(Im phi_n)^2 = eta_s sin(2(k-1)theta + phase_s) + gamma_s``.
    """

    lam: float
    theta: float
    mu: complex
    phi: np.ndarray
    monodromy: np.ndarray

    @property
    def T(self) -> int:
        return len(self.phi)

    @property
    def alpha_t(self) -> np.ndarray:
        return self.phi.real

    @property
    def beta_t(self) -> np.ndarray:
        return self.phi.imag

    @property
    def eta(self) -> np.ndarray:
        return np.abs(self.phi) ** 2 / 2

    @property
    def gamma(self) -> np.ndarray:
        return np.abs(self.phi) ** 2 / 2

    @property
    def phase(self) -> np.ndarray:
        return 2 * np.angle(self.phi) - np.pi / 2

    def oscillation(self) -> list[dict]:
        return [
            {"s": s, "alpha_t": float(self.alpha_t[s]), "beta_t": float(self.beta_t[s]),
             "eta": float(self.eta[s]), "gamma": float(self.gamma[s]), "phase": float(self.phase[s])}
            for s in range(self.T)
        ]


def floquet_solution(
    J: PeriodicJacobi, lam: float, n_max: int = 0, branch: int = 1
) -> tuple[FloquetData, np.ndarray]:
    """Floquet data at ``lam`` and the values ``phi_0..phi_{n_max}``.

    ``branch=-1`` selects the conjugate eigenvalue ``Im mu < 0``; it exists
    for branch-invariance checks only.
    """
    pc = classify_point(J, lam)
    if pc.tag is not PointTag.ELLIPTIC:
        raise NotElliptic(f"lambda = {lam} is {pc.tag.value} (Tr M = {pc.trace.real:.17g})")
    lam = float(lam)
    M = monodromy_numeric(J, lam)
    theta = math.acos(pc.trace.real / 2)
    if branch < 0:
        theta = -theta
    mu = cmath.exp(1j * theta)
    m11, m12 = M[0, 0], M[0, 1]
    if abs(m12) < 1e-13:
        raise DegenerateNormalization(f"m12({lam}) = {m12:.3e} vanishes; phi_0 = 1 is not admissible")
    T = J.T
    cell = np.empty(T + 1, dtype=complex)
    cell[0] = 1.0
    cell[1] = (mu - m11) / m12
    for s in range(1, T):
        cell[s + 1] = ((lam - J.b_at(s)) * cell[s] - J.a_at(s - 1) * cell[s - 1]) / J.a_at(s)
    data = FloquetData(lam, theta, mu, cell[:T].copy(), M)
    return data, floquet_values(data, np.arange(n_max + 1))


def floquet_values(data: FloquetData, n) -> np.ndarray:
    """``phi_n`` from the period cell and the phase factor (no long products)."""
    n = np.asarray(n, dtype=np.int64)
    k1, s = np.divmod(n, data.T)
    return data.phi[s] * np.exp(1j * data.theta * k1)


def wronskians(J: PeriodicJacobi, data: FloquetData) -> np.ndarray:
    """``a_s (phi_{s+1} conj(phi_s) - phi_s conj(phi_{s+1}))`` for ``s = 0..T-1``."""
    phi = floquet_values(data, np.arange(data.T + 1))
    a = np.array([J.a_at(s) for s in range(data.T)])
    return a * (phi[1:] * phi[:-1].conj() - phi[:-1] * phi[1:].conj())
