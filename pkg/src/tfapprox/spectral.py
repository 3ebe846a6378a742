"""Fiber Gramians and a deterministic Hermitian eigensolver.

`eigh` is a cyclic Jacobi method with complex Givens rotations. It is meant
for the small matrices that arise here (one row per data signal), and it is
fully deterministic: identical input gives bit-identical output.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotHermitian

HERMITIAN_TOL = 1e-12
OFFDIAG_TOL = 1e-14
MAX_SWEEPS = 100
PHASE_TOL = 1e-10
CLAMP_TOL = 1e-12
# entries this small relative to ||G||_F are zeroed without a rotation
SKIP_TOL = 1e-20


@dataclass(frozen=True)
class EigenDecomposition:
    """Descending eigenvalues and left eigenvectors stored as rows.

    ``vectors[i] @ G == values[i] * vectors[i]``.
    """

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        Y = self.vectors
        return (Y.conj().T * self.values) @ Y


def gramian(fibers) -> np.ndarray:
    """Matrix of inner products <v_i, v_j> = sum_h v_i(h) conj(v_j(h))."""
    try:
        X = np.asarray(fibers, dtype=complex)
    except ValueError as exc:
        raise DimensionMismatch(f"fiber vectors have inconsistent lengths: {exc}") from None
    if X.ndim != 2:
        raise DimensionMismatch("fibers must be a list of equal-length vectors")
    if X.shape[0] < 1:
        raise DimensionMismatch("at least one fiber vector is required")
    G = X @ X.conj().T
    # exact Hermitian symmetry and a real diagonal
    G = 0.5 * (G + G.conj().T)
    return G


def check_hermitian(G, tol: float = HERMITIAN_TOL) -> np.ndarray:
    G = np.asarray(G, dtype=complex)
    if G.ndim != 2 or G.shape[0] != G.shape[1]:
        raise NotHermitian(f"expected a square matrix, got shape {G.shape}")
    scale = max(1.0, float(np.max(np.abs(G), initial=0.0)))
    dev = float(np.max(np.abs(G - G.conj().T), initial=0.0))
    if dev > tol * scale:
        raise NotHermitian(f"matrix is not Hermitian (max |G - G^H| = {dev:.3e})")
    return G


def _offdiag_norm(A):
    off = A.copy()
    np.fill_diagonal(off, 0.0)
    return np.linalg.norm(off)


def _jacobi(A):
    m = A.shape[0]
    V = np.eye(m, dtype=complex)
    norm = np.linalg.norm(A)
    if m == 1 or norm == 0.0:
        return np.real(np.diag(A)).copy(), V
    tol = OFFDIAG_TOL * norm
    for _ in range(MAX_SWEEPS):
        if _offdiag_norm(A) <= tol:
            break
        for i in range(m - 1):
            for j in range(i + 1, m):
                b = A[i, j]
                mod = abs(b)
                if mod <= SKIP_TOL * norm:
                    A[i, j] = A[j, i] = 0.0
                    continue
                a = A[i, i].real
                c = A[j, j].real
                # rotate the phase of b away, then do a real symmetric Jacobi step
                phase = b / mod
                theta = (c - a) / (2.0 * mod)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(1.0 + theta * theta))
                cs = 1.0 / np.sqrt(1.0 + t * t)
                sn = t * cs
                g = np.array([[cs, sn], [-sn * phase.conjugate(), cs * phase.conjugate()]])
                cols = [i, j]
                A[:, cols] = A[:, cols] @ g
                A[cols, :] = g.conj().T @ A[cols, :]
                V[:, cols] = V[:, cols] @ g
                A[i, j] = A[j, i] = 0.0
                A[i, i] = a - t * mod
                A[j, j] = c + t * mod
    return np.real(np.diag(A)).copy(), V


def _normalize_phase(y):
    for c in y:
        if abs(c) > PHASE_TOL:
            return y * (abs(c) / c)
    return y


def eigh(G) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix.

    Eigenvalues come out in descending order (stable with respect to the
    Jacobi output order on ties). Eigenvalues that are negative only by
    round-off, i.e. above ``-1e-12 * max(1, lambda_max)``, are set to 0.
    Each eigenvector row is rotated so its first non-negligible entry is
    real and positive.
    """
    A = check_hermitian(G).copy()
    A = 0.5 * (A + A.conj().T)
    values, V = _jacobi(A)
    order = np.argsort(-values, kind="stable")
    values = values[order]
    Y = V[:, order].conj().T
    lam_max = values[0] if values.size else 0.0
    floor = -CLAMP_TOL * max(1.0, lam_max)
    values = np.where((values < 0) & (values >= floor), 0.0, values)
    Y = np.array([_normalize_phase(y) for y in Y]).reshape(Y.shape)
    return EigenDecomposition(values=values, vectors=Y)
