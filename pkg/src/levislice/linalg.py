"""Small dense complex linear algebra.

Everything here operates on matrices of dimension at most 16: a cyclic
Jacobi eigensolver for Hermitian matrices, orthonormal bases of complex
tangent spaces via a Householder reflector, and the 2x2 Gram solve behind
the affine-slice inverse map.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_DIM = 16
GRAM_DET_FLOOR = 1e-14


class LinalgError(Exception):
    pass


class ConvergenceError(LinalgError):
    pass


class DependentVectorsError(LinalgError):
    pass


class DegenerateGradientError(LinalgError):
    pass


@dataclass(frozen=True)
class HermitianMatrix:
    """An m x m complex matrix symmetrized to A = (A + A^H)/2 at construction."""
    data: np.ndarray

    @classmethod
    def from_array(cls, a) -> "HermitianMatrix":
        a = np.asarray(a, complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise LinalgError(f"expected a square matrix, got shape {a.shape}")
        if not 1 <= a.shape[0] <= MAX_DIM:
            raise LinalgError(f"dimension {a.shape[0]} outside 1..{MAX_DIM}")
        return cls((a + a.conj().T) / 2.0)

    @property
    def m(self) -> int:
        return self.data.shape[0]


def _as_hermitian(a) -> np.ndarray:
    if isinstance(a, HermitianMatrix):
        return a.data.copy()
    return HermitianMatrix.from_array(a).data


def _offdiag_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def hermitian_eig(a, tol_factor: float = 1e-13,
                  max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Full eigendecomposition by cyclic Jacobi rotations.

    Returns (eigenvalues ascending, eigenvectors as matching columns).
    Sweeps stop when the off-diagonal Frobenius norm drops below
    tol_factor * ||A||_F; exceeding max_sweeps raises ConvergenceError.
    """
    a = _as_hermitian(a)
    m = a.shape[0]
    v = np.eye(m, dtype=complex)
    scale = max(float(np.linalg.norm(a)), np.finfo(float).tiny)
    if m == 1:
        return np.array([a[0, 0].real]), v

    for _ in range(max_sweeps):
        if _offdiag_norm(a) <= tol_factor * scale:
            break
        for p in range(m - 1):
            for q in range(p + 1, m):
                beta = a[p, q]
                ab = abs(beta)
                if ab <= 1e-300:
                    continue
                phase = beta / ab
                alpha = a[p, p].real
                gamma = a[q, q].real
                tau = (gamma - alpha) / (2.0 * ab)
                sign = 1.0 if tau >= 0 else -1.0
                # smaller-magnitude root of t^2 - 2*tau*t - 1 = 0
                t = -sign / (abs(tau) + np.sqrt(tau * tau + 1.0))
                cth = 1.0 / np.sqrt(1.0 + t * t)
                sth = t * cth
                # unitary rotation in the (p, q) plane zeroing a[p, q]
                jb = np.array([[cth, -sth * phase],
                               [sth * np.conj(phase), cth]], dtype=complex)
                idx = [p, q]
                a[:, idx] = a[:, idx] @ jb
                a[idx, :] = jb.conj().T @ a[idx, :]
                v[:, idx] = v[:, idx] @ jb
    else:
        raise ConvergenceError(
            f"Jacobi sweeps did not converge in {max_sweeps} sweeps "
            f"(off-diagonal {_offdiag_norm(a):.3e}, scale {scale:.3e})")

    eigvals = np.diag(a).real.copy()
    order = np.argsort(eigvals)
    return eigvals[order], v[:, order]


def hermitian_eig_min(a) -> tuple[float, np.ndarray]:
    """Smallest eigenvalue and a unit eigenvector."""
    eigvals, vecs = hermitian_eig(a)
    vec = vecs[:, 0]
    return float(eigvals[0]), vec / np.linalg.norm(vec)


def tangent_null_basis(g, grad_floor: float = 1e-8) -> np.ndarray:
    """Orthonormal basis of {Z : sum_j g_j Z_j = 0} as columns of an n x (n-1) matrix.

    Built from the Householder reflector sending conj(g)/|g| to a multiple of
    e1 and keeping columns 2..n.  Column phases are normalized so the largest
    entry of each column is real positive.
    """
    g = np.asarray(g, complex)
    n = len(g)
    gn = np.linalg.norm(g)
    if gn < grad_floor:
        raise DegenerateGradientError(f"|gradient| = {gn:.3e} below floor {grad_floor:.1e}")
    if n < 2:
        raise LinalgError("tangent basis requires dimension >= 2")
    x = np.conj(g) / gn
    phase = x[0] / abs(x[0]) if abs(x[0]) > 0 else 1.0
    v = x.copy()
    v[0] += phase
    h = np.eye(n, dtype=complex) - 2.0 * np.outer(v, np.conj(v)) / np.vdot(v, v).real
    basis = h[:, 1:].copy()
    for k in range(n - 1):
        col = basis[:, k]
        top = col[np.argmax(np.abs(col))]
        basis[:, k] = col * (np.conj(top) / abs(top))
    return basis


def gram_solve_2(b, c, r) -> tuple[complex, complex, float]:
    """Least-squares coefficients of r on span{b, c}: minimize |r - b*w1 - c*w2|.

    Returns (w1, w2, residual_norm).  Raises DependentVectorsError when the
    Gram determinant signals numerically dependent b, c.
    """
    b = np.asarray(b, complex)
    c = np.asarray(c, complex)
    r = np.asarray(r, complex)
    bb = np.vdot(b, b).real
    cc = np.vdot(c, c).real
    cb = np.vdot(b, c)        # <c, b> = sum c_j conj(b_j)
    det = bb * cc - abs(cb) ** 2
    if det <= GRAM_DET_FLOOR * bb * cc:
        raise DependentVectorsError(
            f"b, c numerically dependent (Gram determinant {det:.3e})")
    rb = np.vdot(b, r)        # <r, b>
    rc = np.vdot(c, r)
    w1 = (rb * cc - cb * rc) / det
    w2 = (bb * rc - np.conj(cb) * rb) / det
    resid = r - b * w1 - c * w2
    return complex(w1), complex(w2), float(np.linalg.norm(resid))
