import math
from fractions import Fraction

import numpy as np
import pytest

from conftest import random_operator
from wvnjacobi import (
    band_structure,
    classify_point,
    floquet_solution,
    make_operator,
    monodromy_exact,
    monodromy_numeric,
    quasimomentum,
    transfer_matrix,
)
from wvnjacobi.errors import ExactUnavailable, NotElliptic
from wvnjacobi.exact import Poly
from wvnjacobi.monodromy import PointTag, floquet_values, wronskians

X = Poly.x()


def test_transfer_matrix_examples():
    np.testing.assert_array_equal(transfer_matrix(make_operator([1]), 1, 0), [[0, 1], [-1, 0]])
    J = make_operator([1, 2])
    np.testing.assert_allclose(transfer_matrix(J, 2, 1), [[0, 1], [-0.5, 0.5]])
    np.testing.assert_allclose(transfer_matrix(J, 1, 1), [[0, 1], [-2, 1]])


def test_monodromy_numeric_examples():
    np.testing.assert_allclose(monodromy_numeric(make_operator([1]), 0.7), [[0, 1], [-1, 0.7]])
    M = monodromy_numeric(make_operator([1, 2]), 2.0)
    np.testing.assert_allclose(M, [[-2, 2], [-2, 1.5]])
    assert np.trace(M) == pytest.approx(-0.5)


def test_monodromy_exact_examples():
    M = monodromy_exact(make_operator([1]))
    assert (M.m11, M.m12, M.m21, M.m22) == (Poly(), Poly.const(1), Poly.const(-1), X)
    M = monodromy_exact(make_operator([1, 2]))
    assert M.m11 == Poly.const(-2) and M.m12 == X and M.m21 == -X
    assert M.m22 == X * X * Fraction(1, 2) - Fraction(1, 2)
    # by hand for a = (1, 1, 1): B = [[0,1],[-1,λ]], M = B³
    M = monodromy_exact(make_operator([1, 1, 1]))
    assert M.m11 == -X and M.m12 == X**2 - 1 and M.m21 == 1 - X**2 and M.m22 == X**3 - 2 * X


def test_monodromy_exact_requires_rationals():
    with pytest.raises(ExactUnavailable):
        monodromy_exact(make_operator([1.0, 2.5]))


def test_det_is_one_numeric():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        T = int(rng.integers(1, 9))
        J = make_operator(rng.uniform(0.2, 3, T).tolist(), rng.uniform(-2, 2, T).tolist())
        lam = complex(rng.uniform(-6, 6), rng.uniform(-1, 1) * rng.integers(0, 2))
        M = monodromy_numeric(J, lam)
        scale = max(1.0, float(np.abs(M).max()) ** 2)
        assert abs(np.linalg.det(M) - 1) <= 1e-12 * scale


def test_exact_matches_numeric(rng):
    for T in range(1, 7):
        J = random_operator(rng, T, with_b=True)
        M = monodromy_exact(J)
        for _ in range(20):
            lam = Fraction(rng.randint(-40, 40), rng.randint(1, 10))
            ref = monodromy_numeric(J, float(lam))
            got = np.array([[float(M.m11(lam)), float(M.m12(lam))], [float(M.m21(lam)), float(M.m22(lam))]])
            np.testing.assert_allclose(got, ref, rtol=1e-10, atol=1e-10 * max(1, np.abs(ref).max()))


def test_classify_examples():
    J1 = make_operator([1])
    assert classify_point(J1, 0).tag is PointTag.ELLIPTIC
    assert classify_point(J1, 2).tag is PointTag.PARABOLIC
    assert classify_point(J1, 3).tag is PointTag.HYPERBOLIC
    pc = classify_point(make_operator([1, 1]), 0.5 + 0.5j)
    assert pc.tag is PointTag.HYPERBOLIC
    small, big = sorted(map(abs, pc.eigenvalues))
    assert small < 1 < big
    assert abs(pc.mu * pc.mu_partner - 1) < 1e-10


def test_elliptic_mu_on_upper_circle():
    pc = classify_point(make_operator([1, 2]), 2.0)
    assert pc.tag is PointTag.ELLIPTIC
    assert abs(abs(pc.mu) - 1) < 1e-12 and pc.mu.imag > 0
    assert abs(pc.mu * pc.mu_partner - 1) < 1e-10


def test_quasimomentum_examples():
    J = make_operator([1])
    assert quasimomentum(J, 0) == pytest.approx(math.pi / 2)
    assert quasimomentum(J, 1) == pytest.approx(math.pi / 3)
    with pytest.raises(NotElliptic):
        quasimomentum(J, 2)


def test_hyperbolic_off_axis():
    rng = np.random.default_rng(11)
    for _ in range(500):
        T = int(rng.integers(1, 7))
        J = make_operator(rng.uniform(0.2, 3, T).tolist(), rng.uniform(-2, 2, T).tolist())
        lam = complex(rng.uniform(-5, 5), rng.choice([-1, 1]) * 10 ** rng.uniform(-3, 0.5))
        pc = classify_point(J, lam)
        assert pc.tag is PointTag.HYPERBOLIC
        # oracle: numpy eigenvalues of the numeric monodromy
        mods = sorted(abs(z) for z in np.linalg.eigvals(monodromy_numeric(J, lam)))
        assert mods[0] < 1 < mods[1]
        assert sorted(map(abs, pc.eigenvalues)) == pytest.approx(mods, rel=1e-8)


def test_floquet_examples():
    data, phi = floquet_solution(make_operator([1]), 1.0, n_max=30)
    assert data.theta == pytest.approx(math.pi / 3)
    np.testing.assert_allclose(phi, np.exp(1j * np.arange(31) * math.pi / 3), atol=1e-14)
    data, _ = floquet_solution(make_operator([1, 2]), 2.0)
    assert math.cos(data.theta) == pytest.approx(-0.25)
    assert data.phi[1] == pytest.approx((data.mu + 2) / 2)


def test_floquet_invariants(rng):
    for T in range(1, 7):
        J = random_operator(rng, T, with_b=True)
        for lo, hi in band_structure(J).bands:
            lam = lo + (hi - lo) * rng.uniform(0.1, 0.9)
            data, phi = floquet_solution(J, lam, n_max=6 * T + 5)
            assert phi[0] == 1
            # eigen-relation M (phi_0, phi_1) = mu (phi_0, phi_1)
            v = np.array([phi[0], phi[1]])
            np.testing.assert_allclose(data.monodromy @ v, data.mu * v, atol=1e-10 * np.abs(v).max())
            np.testing.assert_allclose(data.eta, np.abs(data.phi) ** 2 / 2, rtol=1e-12)
            np.testing.assert_array_equal(data.eta, data.gamma)
            w = wronskians(J, data)
            assert np.max(np.abs(w - w[0])) <= 1e-10 * abs(w[0])
            for n in range(1, len(phi) - 1):
                lhs = J.a_at(n - 1) * phi[n - 1] + J.b_at(n) * phi[n] + J.a_at(n) * phi[n + 1]
                assert abs(lhs - lam * phi[n]) <= 1e-10 * max(1, np.abs(phi).max())
            np.testing.assert_allclose(np.abs(phi[T:]), np.abs(phi[:-T]), rtol=1e-12)


def test_oscillation_identity():
    # (Im phi_n)^2 = eta_s sin(2(k-1)theta + phase_s) + gamma_s
    J = make_operator([1, 2, 3])
    data, phi = floquet_solution(J, 0.3, n_max=40)
    for n in range(41):
        k1, s = divmod(n, 3)
        rhs = data.eta[s] * math.sin(2 * k1 * data.theta + data.phase[s]) + data.gamma[s]
        assert phi[n].imag ** 2 == pytest.approx(rhs, abs=1e-12)


def test_branch_conjugate():
    J = make_operator([1, 2])
    d1, _ = floquet_solution(J, 2.0)
    d2, _ = floquet_solution(J, 2.0, branch=-1)
    assert d2.mu == pytest.approx(d1.mu.conjugate())
    assert np.allclose(floquet_values(d2, np.arange(10)), floquet_values(d1, np.arange(10)).conj())
