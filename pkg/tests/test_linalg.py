from __future__ import annotations

import numpy as np
import pytest
import scipy.linalg as sla
from hypothesis import given
from hypothesis import strategies as st

from quasistar.linalg import (
    AntilinearMap,
    GramFrame,
    SingularOperatorError,
    antilinear_adjoint,
    check_gram,
    gram_opnorm,
    inner,
    matrix_power,
    nullspace,
    polar_antilinear,
)

from conftest import random_complex, random_pd


def test_inner_orthonormal_basis():
    e1, e2 = np.eye(2)
    assert inner(e1, e1, np.eye(2)) == 1
    assert inner(e1, e2, np.eye(2)) == 0


def test_inner_hand_expansion():
    G = np.array([[1, 0.5j], [-0.5j, 1]])
    # conj(b)^T G a with a = e1, b = e2 picks G[1, 0]
    assert inner([1, 0], [0, 1], G) == pytest.approx(-0.5j)


def test_inner_is_linear_in_first_slot(rng):
    G = random_pd(3, rng)
    a, b = random_complex((2, 3), rng)
    lam = 2 - 3j
    assert inner(lam * a, b, G) == pytest.approx(lam * inner(a, b, G))
    assert inner(a, lam * b, G) == pytest.approx(np.conj(lam) * inner(a, b, G))


def test_antilinear_composition_rules(rng):
    A = AntilinearMap(random_complex((3, 3), rng))
    B = AntilinearMap(random_complex((3, 3), rng))
    L = random_complex((3, 3), rng)
    v = random_complex(3, rng)
    np.testing.assert_allclose((A @ B) @ v, A(B(v)))
    np.testing.assert_allclose((L @ A)(v), L @ A(v))
    np.testing.assert_allclose((A @ L)(v), A(L @ v))
    assert isinstance(A @ B, np.ndarray)
    assert isinstance(L @ A, AntilinearMap)


def test_antilinear_is_conjugate_homogeneous(rng):
    A = AntilinearMap(random_complex((3, 3), rng))
    v = random_complex(3, rng)
    np.testing.assert_allclose(A(1j * v), -1j * A(v))


def test_adjoint_of_conjugation_is_conjugation():
    T = AntilinearMap(np.eye(2))
    np.testing.assert_array_equal(antilinear_adjoint(T, np.eye(2)).matrix, np.eye(2))


def test_adjoint_diag_example():
    T = AntilinearMap(np.diag([2.0, 3.0]))
    Ts = antilinear_adjoint(T, np.eye(2))
    np.testing.assert_allclose(Ts.matrix, np.diag([2.0, 3.0]))
    for a in np.eye(2):
        for b in np.eye(2):
            assert inner(T(a), b, np.eye(2)) == pytest.approx(inner(Ts(b), a, np.eye(2)))


@given(st.integers(1, 4), st.integers(0, 2**31 - 1))
def test_adjoint_defining_identity(n, seed):
    rng = np.random.default_rng(seed)
    G = random_pd(n, rng)
    T = AntilinearMap(random_complex((n, n), rng))
    Ts = antilinear_adjoint(T, G)
    for a in np.eye(n):
        for b in np.eye(n):
            assert abs(inner(T(a), b, G) - inner(Ts(b), a, G)) < 1e-9 * (1 + np.abs(T.matrix).max())
    np.testing.assert_allclose(antilinear_adjoint(Ts, G).matrix, T.matrix, atol=1e-9)


def test_check_gram_names():
    assert check_gram(np.eye(2)) == []
    names = [n for n, _ in check_gram(np.array([[1, 2], [0, 1]]))]
    assert names == ["gram.hermitian"]
    names = [n for n, _ in check_gram(np.diag([1.0, -1.0]))]
    assert names == ["gram.positive-definite"]
    names = [n for n, _ in check_gram(np.ones((2, 3)))]
    assert names == ["gram.shape"]


def test_gram_opnorm_trivial():
    G = random_pd(3, np.random.default_rng(0))
    assert gram_opnorm(np.eye(3), G) == pytest.approx(1.0)
    assert gram_opnorm(np.diag([3.0, 1.0]), np.eye(2)) == pytest.approx(3.0)


def test_gram_opnorm_weighted_nilpotent_brute_force():
    L = np.array([[0.0, 1.0], [0.0, 0.0]])
    G = np.diag([4.0, 1.0])
    # brute force over unit directions (with phases) of ||Lv||_G / ||v||_G
    best = 0.0
    for th in np.linspace(0, np.pi, 2001):
        for ph in np.linspace(0, 2 * np.pi, 9):
            v = np.array([np.cos(th), np.sin(th) * np.exp(1j * ph)])
            best = max(best, np.sqrt((np.conj(L @ v) @ G @ (L @ v)).real
                                     / (np.conj(v) @ G @ v).real))
    assert best == pytest.approx(2.0, rel=1e-6)
    assert gram_opnorm(L, G) == pytest.approx(2.0, rel=1e-12)


@given(st.integers(1, 4), st.integers(0, 2**31 - 1))
def test_gram_opnorm_matches_generalized_eigenproblem(n, seed):
    rng = np.random.default_rng(seed)
    G = random_pd(n, rng)
    L = random_complex((n, n), rng)
    w = sla.eigh(L.conj().T @ G @ L, G, eigvals_only=True)
    assert gram_opnorm(L, G) == pytest.approx(np.sqrt(w[-1]), rel=1e-9)


def test_gram_opnorm_rectangular_and_empty(rng):
    Gs = random_pd(3, rng)
    Gt = random_pd(2, rng)
    P = random_complex((2, 3), rng)
    w = sla.eigh(P.conj().T @ Gt @ P, Gs, eigvals_only=True)
    assert gram_opnorm(P, Gs, Gt) == pytest.approx(np.sqrt(w[-1]), rel=1e-9)
    assert gram_opnorm(np.zeros((0, 2)), np.eye(2), np.zeros((0, 0))) == 0.0


def test_nullspace_examples():
    assert nullspace(np.eye(3)) == []
    assert len(nullspace(np.zeros((3, 3)))) == 3
    (v,) = nullspace(np.ones((2, 2)))
    assert abs(abs(np.vdot(v, [1, -1])) / np.sqrt(2) - 1) < 1e-12


@given(st.integers(1, 5), st.integers(0, 4), st.integers(0, 2**31 - 1))
def test_nullspace_dimension_and_orthonormality(n, r, seed):
    r = min(r, n)
    rng = np.random.default_rng(seed)
    M = random_complex((n, r), rng) @ random_complex((r, n), rng)
    vs = nullspace(M)
    assert len(vs) == n - r
    if vs:
        V = np.array(vs).T
        np.testing.assert_allclose(V.conj().T @ V, np.eye(len(vs)), atol=1e-10)
        assert np.abs(M @ V).max() < 1e-8 * max(1, np.abs(M).max())


def test_matrix_power_examples():
    np.testing.assert_allclose(matrix_power(np.eye(3), 0.3 + 2j, np.eye(3)), np.eye(3), atol=1e-14)
    np.testing.assert_allclose(matrix_power(np.diag([4.0, 1.0]), 0.5, np.eye(2)),
                               np.diag([2.0, 1.0]), atol=1e-14)
    U = matrix_power(np.diag([2.0, 0.5]), 1j, np.eye(2))
    np.testing.assert_allclose(U, np.diag([np.exp(1j * np.log(2)), np.exp(-1j * np.log(2))]),
                               atol=1e-14)
    np.testing.assert_allclose(U.conj().T @ U, np.eye(2), atol=1e-12)


def test_matrix_power_rejects_singular():
    with pytest.raises(SingularOperatorError):
        matrix_power(np.diag([1.0, 0.0]), -1, np.eye(2))


@given(st.integers(1, 4), st.integers(0, 2**31 - 1),
       st.complex_numbers(max_magnitude=2), st.complex_numbers(max_magnitude=2))
def test_matrix_power_group_law(n, seed, a, b):
    rng = np.random.default_rng(seed)
    G = random_pd(n, rng)
    # G-self-adjoint positive operator: G^{-1} H with H positive definite
    H = random_pd(n, rng)
    D = np.linalg.solve(G, H)
    lhs = matrix_power(D, a, G) @ matrix_power(D, b, G)
    rhs = matrix_power(D, a + b, G)
    scale = max(np.abs(lhs).max(), 1.0)
    assert np.abs(lhs - rhs).max() / scale < 1e-8


def _scipy_polar(S: AntilinearMap, G):
    """Independent oracle: right polar decomposition of the frame matrix."""
    W = sla.sqrtm(G)
    Wi = np.linalg.inv(W)
    Mt = W @ S.matrix @ np.linalg.inv(W.conj())
    U, P = sla.polar(Mt, side="right")
    J = Wi @ U @ W.conj()
    Delta = Wi @ (P.conj() @ P.conj()) @ W
    return J, Delta


def test_polar_trivial_conjugation():
    J, D = polar_antilinear(AntilinearMap(np.eye(3)), np.eye(3))
    np.testing.assert_allclose(J.matrix, np.eye(3), atol=1e-14)
    np.testing.assert_allclose(D, np.eye(3), atol=1e-14)


@given(st.integers(1, 4), st.integers(0, 2**31 - 1))
def test_polar_matches_scipy_oracle(n, seed):
    rng = np.random.default_rng(seed)
    G = random_pd(n, rng)
    S = AntilinearMap(random_complex((n, n), rng) + 3 * np.eye(n))
    J, D = polar_antilinear(S, G)
    J0, D0 = _scipy_polar(S, G)
    np.testing.assert_allclose(J.matrix, J0, atol=1e-8)
    np.testing.assert_allclose(D, D0, atol=1e-8 * max(1, np.abs(D0).max()))
    # S = J Delta^{1/2}
    half = matrix_power(D, 0.5, G)
    np.testing.assert_allclose((J @ half).matrix, S.matrix, atol=1e-8 * np.abs(S.matrix).max())


def test_polar_singular_raises():
    with pytest.raises(SingularOperatorError):
        polar_antilinear(AntilinearMap(np.diag([1.0, 0.0])), np.eye(2))


def test_gram_frame_round_trip(rng):
    G = random_pd(3, rng)
    f = GramFrame(G)
    X = random_complex((3, 3), rng)
    np.testing.assert_allclose(f.linear_out(f.linear_in(X)), X, atol=1e-10)
    np.testing.assert_allclose(f.anti_out(f.anti_in(X)), X, atol=1e-10)
    np.testing.assert_allclose(f.W @ f.W, G, atol=1e-10)
