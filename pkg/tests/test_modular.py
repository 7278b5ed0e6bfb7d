from __future__ import annotations

import numpy as np
import pytest
import scipy.linalg as sla
from hypothesis import given
from hypothesis import strategies as st

from quasistar.algebra import AlgebraSpec, left_mult, right_mult
from quasistar.hcq import gen_commutative, gen_matrix_state
from quasistar.linalg import AntilinearMap
from quasistar.modular import (
    InternalConsistencyError,
    ModularData,
    check_left_hilbert,
    commutant,
    extension_check,
    generated_algebra,
    modular_data,
    quasi_unit,
    remark_probe,
    span_residual,
    standardness,
    standardness_form,
    tomita_check,
    tomita_flow,
    unit_residuals,
)

from conftest import commutative_specs, faithful_rho, random_complex


def _closed_form_delta(rho):
    """Delta e_ij = (rho_i / rho_j) e_ij in row-major matrix-unit coordinates."""
    rho = np.asarray(rho, dtype=float)
    return np.diag(np.outer(rho, 1 / rho).ravel())


def _closed_form_J(rho):
    """Matrix of x -> rho^{1/2} x^H rho^{-1/2} acting on vec(x) through conj."""
    n = len(rho)
    r = np.sqrt(np.asarray(rho, dtype=float))
    M = np.zeros((n * n, n * n))
    for i in range(n):
        for j in range(n):
            X = np.zeros((n, n))
            X[i, j] = 1.0
            # apply to conj(e_ij) = e_ij: result rho^{1/2} e_ji rho^{-1/2}
            M[:, i * n + j] = (np.diag(r) @ X.T @ np.diag(1 / r)).ravel()
    return M


def _zero_product():
    return AlgebraSpec(structure=np.zeros((2, 2, 2)), star=np.eye(2), sharp=np.eye(2),
                       gram=np.eye(2))


def test_left_hilbert_matrix_state_all_pass():
    rep = check_left_hilbert(gen_matrix_state(2, ["2/3", "1/3"]))
    assert rep.ok
    assert rep["left-hilbert.(iii)"].note == "products span dimension 4 of 4"


def test_left_hilbert_zero_product_fails_iii():
    rep = check_left_hilbert(_zero_product())
    assert [c.name for c in rep.failed] == ["left-hilbert.(iii)"]


def test_left_hilbert_commutative_passes():
    assert check_left_hilbert(gen_commutative([0.5, 0.5])).ok


def test_modular_data_tracial():
    md = modular_data(gen_matrix_state(2, [0.5, 0.5]))
    np.testing.assert_allclose(md.Delta, np.eye(4), atol=1e-14)
    np.testing.assert_allclose(md.J.matrix, gen_matrix_state(2, [0.5, 0.5]).sharp.matrix, atol=1e-14)


def test_modular_data_matrix_state_oracle():
    rho = [2 / 3, 1 / 3]
    md = modular_data(gen_matrix_state(2, rho))
    np.testing.assert_allclose(sorted(md.spectrum()), [0.5, 1, 1, 2], rtol=1e-12)
    np.testing.assert_allclose(md.Delta, _closed_form_delta(rho), atol=1e-12)
    np.testing.assert_allclose(md.J.matrix, _closed_form_J(rho), atol=1e-12)
    assert md.ok()


def test_modular_data_commutative_trivial():
    md = modular_data(gen_commutative([0.5, 0.5]))
    np.testing.assert_allclose(md.Delta, np.eye(2), atol=1e-14)
    np.testing.assert_allclose(md.J.matrix, np.eye(2), atol=1e-14)


@given(faithful_rho())
def test_modular_data_matches_closed_form(rho):
    md = modular_data(gen_matrix_state(len(rho), rho))
    np.testing.assert_allclose(md.Delta, _closed_form_delta(rho), atol=1e-9 * np.max(rho) / np.min(rho))
    np.testing.assert_allclose(md.J.matrix, _closed_form_J(rho), atol=1e-9 * np.sqrt(np.max(rho) / np.min(rho)))
    assert md.ok()


def _oracle_commutant_dim(mats, n):
    # column-major vec: vec(AX - XA) = (I kron A - A^T kron I) vec X
    I = np.eye(n)
    rows = []
    for A in mats:
        for B in (A, A.conj().T):
            rows.append(np.kron(I, B) - np.kron(B.T, I))
    return sla.null_space(np.vstack(rows), rcond=1e-10).shape[1]


def test_commutant_of_left_M2_is_right_mult():
    spec = gen_matrix_state(2, [0.5, 0.5])
    Ls = [left_mult(spec, b) for b in spec.basis()]
    Rs = [right_mult(spec, b) for b in spec.basis()]
    C = commutant(Ls, spec.gram)
    assert C.dim == 4 == _oracle_commutant_dim(Ls, 4)
    assert span_residual(C.basis, Rs, 1e-10) < 1e-10
    assert span_residual(Rs, C.basis, 1e-10) < 1e-10


def test_commutant_examples():
    assert commutant([np.eye(3)], np.eye(3)).dim == 9
    D = [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]
    C = commutant(D, np.eye(2))
    assert C.dim == 2
    for X in C.basis:
        np.testing.assert_allclose(X - np.diag(np.diag(X)), 0, atol=1e-12)


@given(st.integers(2, 4), st.integers(0, 2**31 - 1))
def test_commutant_dimension_matches_oracle(n, seed):
    rng = np.random.default_rng(seed)
    # block-diagonal generator has a predictable but non-trivial commutant
    k = rng.integers(1, n)
    A = np.zeros((n, n), complex)
    A[:k, :k] = random_complex((k, k), rng)
    mats = [A, np.diag([1.0] * k + [0.0] * (n - k))]
    assert commutant(mats, np.eye(n)).dim == _oracle_commutant_dim(mats, n)


def test_generated_algebra_dimension():
    e12 = np.array([[0.0, 1.0], [0.0, 0.0]])
    assert generated_algebra([e12], unital=True).dim == 4
    assert generated_algebra([np.diag([1.0, 2.0])], unital=True).dim == 2


@pytest.mark.parametrize("n,rho", [(2, ["2/3", "1/3"]), (3, ["1/3", "1/3", "1/3"]),
                                   (3, ["1/2", "1/3", "1/6"])])
def test_tomita_matrix_state(n, rho):
    rep = tomita_check(gen_matrix_state(n, rho))
    assert rep.ok
    assert rep.dim_commutant == rep.dim_double_commutant == n * n


def test_tomita_commutative_maximal_abelian():
    rep = tomita_check(gen_commutative([0.5, 0.5]))
    assert rep.ok
    assert rep.dim_L == rep.dim_commutant == rep.dim_double_commutant == 2


def test_standardness_tracial_and_matrix_state():
    assert standardness(gen_matrix_state(2, [0.5, 0.5])).standard
    s = standardness(gen_matrix_state(2, ["2/3", "1/3"]))
    assert s.standard and s.criterion_i and s.criterion_ii
    assert s.witness is None


def test_standardness_swap_witness():
    s = standardness(gen_commutative(["1/2", "1/2"], "swap"))
    assert not s.standard
    np.testing.assert_allclose(s.witness, [1, -1], atol=1e-12)
    assert abs(s.witness_value - (-1)) < 1e-12


@given(commutative_specs(), st.integers(0, 2**31 - 1))
def test_standardness_form_matches_direct_evaluation(data, seed):
    spec, _ = data
    rng = np.random.default_rng(seed)
    C = standardness_form(spec)
    G = spec.gram
    for x in random_complex((8, spec.dim), rng):
        direct = np.conj(spec.star(x)) @ G @ spec.sharp(x)
        y = np.conj(x)
        assert abs(direct - y.conj() @ C @ y) < 1e-10 * (1 + np.abs(direct))


@given(commutative_specs())
def test_standard_iff_untwisted(data):
    spec, perm = data
    s = standardness(spec)
    assert s.standard == bool(np.all(perm == np.arange(len(perm))))


def test_standardness_disagreement_raises():
    # a modular conjugation that does not belong to the spec splits the criteria
    spec = gen_commutative([1.0])
    md = modular_data(spec)
    fake = ModularData(S=md.S, J=AntilinearMap(-np.eye(1)), Delta=md.Delta, gram=md.gram,
                       residuals={})
    with pytest.raises(InternalConsistencyError):
        standardness(spec, fake)


def test_remark_probe_examples():
    p = remark_probe(gen_commutative(["1/2", "1/2"], "swap"))
    assert p.commutant_R_equals_double_L and p.J_commutes_with_JA and not p.J_equals_JA
    for spec in (gen_matrix_state(2, [0.5, 0.5]), gen_matrix_state(2, ["2/3", "1/3"])):
        p = remark_probe(spec)
        assert p.commutant_R_equals_double_L and p.J_commutes_with_JA and p.J_equals_JA


def test_quasi_unit_matrix_state():
    spec = gen_matrix_state(2, ["2/3", "1/3"])
    u = quasi_unit(spec)
    np.testing.assert_allclose(u, np.eye(2).ravel(), atol=1e-12)
    np.testing.assert_allclose(spec.sharp(u), u, atol=1e-12)
    assert all(v < 1e-10 for v in unit_residuals(spec, u).values())


def test_quasi_unit_commutative_and_zero_product():
    np.testing.assert_allclose(quasi_unit(gen_commutative([0.25, 0.5])), [1, 1], atol=1e-12)
    assert quasi_unit(_zero_product()) is None


def test_flow_alpha_zero_exact():
    rep = tomita_flow(gen_matrix_state(2, ["2/3", "1/3"]), [0])
    assert rep.ok
    assert all(c.residual < 1e-14 for c in rep.checks)


def test_flow_matrix_state():
    rep = tomita_flow(gen_matrix_state(2, ["2/3", "1/3"]), [0.5, 1j])
    assert rep.ok
    assert rep.checks["flow.left-mult(alpha=0+1i)"].residual < 1e-8
    assert rep.checks["flow.sharp(alpha=0.5+0i)"].residual < 1e-8


@given(faithful_rho(), st.floats(-3, 3))
def test_flow_is_conjugation_by_rho_it(rho, t):
    n = len(rho)
    spec = gen_matrix_state(n, rho)
    U = modular_data(spec).power(1j * t)
    rng = np.random.default_rng(0)
    X = random_complex((n, n), rng)
    R = np.diag(np.asarray(rho) ** (1j * t))
    expected = R @ X @ np.linalg.inv(R)
    np.testing.assert_allclose(U @ X.ravel(), expected.ravel(), atol=1e-9 * np.abs(X).max())


def test_extension_identity():
    spec = gen_matrix_state(2, ["2/3", "1/3"])
    rep = extension_check(spec, spec, np.eye(4))
    assert rep.is_extension


def test_extension_diagonal_into_tracial_M2():
    A = gen_matrix_state(2, [0.5, 0.5])
    B = gen_commutative([0.5, 0.5])
    E = np.zeros((4, 2))
    E[0, 0] = E[3, 1] = 1.0
    rep = extension_check(A, B, E)
    assert rep.is_subalgebra and not rep.is_extension
    assert rep.checks["extension.dense"].status == "info"
    twisted = B.replace(sharp=np.array([[0.0, 1.0], [1.0, 0.0]]))
    rep = extension_check(A, twisted, E)
    assert [c.name for c in rep.checks.failed] == ["extension.S-compatible"]
