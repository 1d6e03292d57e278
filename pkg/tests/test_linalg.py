import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from levislice import linalg as la


def random_hermitian(rng, m):
    x = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    return (x + x.conj().T) / 2


# ---------------------------------------------------------------------------
# eigensolver
# ---------------------------------------------------------------------------

def test_eig_min_identity():
    lam, vec = la.hermitian_eig_min(np.eye(2))
    assert lam == pytest.approx(1.0, abs=1e-14)
    assert np.linalg.norm(vec) == pytest.approx(1.0, abs=1e-14)


def test_eig_min_diagonal():
    lam, vec = la.hermitian_eig_min(np.diag([-1.0, 0.0]))
    assert lam == pytest.approx(-1.0, abs=1e-14)
    assert abs(vec[0]) == pytest.approx(1.0, abs=1e-12)


def test_eig_min_pauli_y():
    a = np.array([[0, 1j], [-1j, 0]])
    lam, vec = la.hermitian_eig_min(a)
    assert lam == pytest.approx(-1.0, abs=1e-12)
    assert np.linalg.norm(a @ vec + vec) <= 1e-10


def test_eig_symmetrizes_input():
    hm = la.HermitianMatrix.from_array(np.array([[1.0, 2.0], [0.0, 3.0]]))
    assert np.allclose(hm.data, hm.data.conj().T)


def test_eig_dimension_bounds():
    with pytest.raises(la.LinalgError):
        la.HermitianMatrix.from_array(np.eye(17))


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6), m=st.integers(1, 8))
def test_eig_reconstruction(seed, m):
    rng = np.random.default_rng(seed)
    a = random_hermitian(rng, m)
    w, v = la.hermitian_eig(a)
    assert np.max(np.abs(a - v @ np.diag(w) @ v.conj().T)) <= 1e-10
    assert np.max(np.abs(v.conj().T @ v - np.eye(m))) <= 1e-10
    assert np.all(np.diff(w) >= 0)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_eig_2x2_closed_form(seed):
    rng = np.random.default_rng(seed)
    a = random_hermitian(rng, 2)
    w, _ = la.hermitian_eig(a)
    tr = a[0, 0].real + a[1, 1].real
    det = (a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]).real
    disc = np.sqrt(tr * tr - 4 * det)
    assert w[0] == pytest.approx((tr - disc) / 2, abs=1e-12)
    assert w[1] == pytest.approx((tr + disc) / 2, abs=1e-12)


# ---------------------------------------------------------------------------
# tangent basis
# ---------------------------------------------------------------------------

def test_tangent_basis_axis_case():
    basis = la.tangent_null_basis(np.array([0.0, 0.5]))
    assert basis.shape == (2, 1)
    assert np.allclose(basis[:, 0], [1, 0])


def test_tangent_basis_e1_c3():
    basis = la.tangent_null_basis(np.array([1.0, 0, 0], complex))
    assert basis.shape == (3, 2)
    assert np.max(np.abs(basis[0, :])) <= 1e-12   # columns span {Z1 = 0}
    assert np.allclose(basis.conj().T @ basis, np.eye(2))


def test_tangent_basis_hand_null_space():
    g = np.array([1.0, 1.0]) / np.sqrt(2)
    basis = la.tangent_null_basis(g)
    v = basis[:, 0]
    assert abs(v[0] + v[1]) <= 1e-12
    assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-12)


def test_tangent_basis_gradient_floor():
    with pytest.raises(la.DegenerateGradientError):
        la.tangent_null_basis(np.array([1e-10, 0]))


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 10**6), n=st.integers(2, 8))
def test_tangent_basis_properties(seed, n):
    rng = np.random.default_rng(seed)
    g = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    basis = la.tangent_null_basis(g)
    assert np.max(np.abs(basis.conj().T @ basis - np.eye(n - 1))) <= 1e-12
    # bilinear tangency convention: sum_j g_j v_j = 0 (no conjugate on g)
    assert np.max(np.abs(g @ basis)) <= 1e-12 * np.linalg.norm(g)


# ---------------------------------------------------------------------------
# Gram solve
# ---------------------------------------------------------------------------

def test_gram_solve_orthonormal_case():
    b = np.array([1, 0], complex)
    c = np.array([0, 1], complex)
    w1, w2, resid = la.gram_solve_2(b, c, b)
    assert (w1, w2) == (pytest.approx(1), pytest.approx(0))
    assert resid <= 1e-14


def test_gram_solve_zero_target():
    w1, w2, resid = la.gram_solve_2(np.array([0, 0.1]), np.array([1, 0]),
                                    np.zeros(2))
    assert abs(w1) <= 1e-14 and abs(w2) <= 1e-14 and resid <= 1e-14


def test_gram_solve_off_span_residual():
    b = np.array([1, 0, 0], complex)
    c = np.array([0, 1, 0], complex)
    w1, w2, resid = la.gram_solve_2(b, c, np.array([0, 0, 1], complex))
    assert abs(w1) <= 1e-14 and abs(w2) <= 1e-14
    assert resid == pytest.approx(1.0, abs=1e-14)


def test_gram_solve_dependent_vectors():
    with pytest.raises(la.DependentVectorsError):
        la.gram_solve_2(np.array([1, 0], complex), np.array([2, 0], complex),
                        np.zeros(2))


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 10**6), n=st.integers(2, 6))
def test_gram_solve_residual_orthogonality(seed, n):
    rng = np.random.default_rng(seed)
    b = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    c = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    r = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    w1, w2, _ = la.gram_solve_2(b, c, r)
    resid = r - b * w1 - c * w2
    assert abs(np.vdot(b, resid)) <= 1e-10 * (1 + np.linalg.norm(r))
    assert abs(np.vdot(c, resid)) <= 1e-10 * (1 + np.linalg.norm(r))
