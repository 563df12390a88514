"""Dense complex linear algebra primitives.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Every predicate
takes an explicit tolerance; ``DEFAULT_TOL`` is used when none is given.
"""
from typing import NamedTuple, Sequence, Tuple

import numpy as np

from .errors import DimensionMismatch, NonHermitianInput

DEFAULT_TOL = 1e-9

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(a) -> np.ndarray:
    """Coerce ``a`` to a finite square complex matrix."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def max_norm(a: np.ndarray) -> float:
    return float(np.max(np.abs(a))) if a.size else 0.0


def frob(a: np.ndarray) -> float:
    return float(np.linalg.norm(a))


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(a).T


def hermitian_residual(a: np.ndarray) -> float:
    return max_norm(a - dagger(a))


def _check_same_shape(a, b):
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")


def eig_hermitian(h, tol: float = 1e-10) -> EigenDecomposition:
    """Eigendecomposition of a hermitian matrix.

    Eigenvalues are returned ascending. The input is symmetrised before the
    LAPACK call so the result is deterministic for a fixed input.

    Raises:
        NonHermitianInput: if ``max|H - H^dag|`` exceeds ``tol * max|H|``.
    """
    h = as_matrix(h)
    scale = max(1.0, max_norm(h))
    if hermitian_residual(h) > tol * scale:
        raise NonHermitianInput(
            f"hermitian residual {hermitian_residual(h):.3e} exceeds {tol * scale:.3e}"
        )
    w, v = np.linalg.eigh(0.5 * (h + dagger(h)))
    return EigenDecomposition(w, v)


def commutator(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    _check_same_shape(a, b)
    return a @ b - b @ a


def is_normal(a, tol: float = DEFAULT_TOL) -> bool:
    a = as_matrix(a)
    scale = max(1.0, frob(a) ** 2)
    return frob(a @ dagger(a) - dagger(a) @ a) <= tol * scale


def is_hermitian(a, tol: float = DEFAULT_TOL) -> bool:
    a = as_matrix(a)
    return hermitian_residual(a) <= tol * max(1.0, max_norm(a))


def is_psd(a, tol: float = DEFAULT_TOL) -> bool:
    """True iff the smallest eigenvalue is >= ``-tol * max(1, largest)``."""
    w = eig_hermitian(a, tol=max(tol, 1e-10)).eigenvalues
    return w[0] >= -tol * max(1.0, w[-1])


def is_unitary(u, tol: float = 1e-10) -> bool:
    u = as_matrix(u)
    return max_norm(dagger(u) @ u - np.eye(u.shape[0])) <= tol


def kron(a, b) -> np.ndarray:
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_trace(m, dims: Tuple[int, int], keep: str = "A") -> np.ndarray:
    """Partial trace of an operator on ``C^m (x) C^n``.

    ``keep="A"`` traces out the second factor, ``keep="B"`` the first.
    """
    m = as_matrix(m)
    da, db = dims
    if m.shape[0] != da * db:
        raise DimensionMismatch(f"matrix of size {m.shape[0]} is not {da}x{db}")
    t = m.reshape(da, db, da, db)
    if keep == "A":
        return np.einsum("ikjk->ij", t)
    if keep == "B":
        return np.einsum("kikj->ij", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def operator_norm(a) -> float:
    """Largest singular value."""
    return float(np.linalg.norm(as_matrix(a), 2))


def hs_inner(a, b) -> complex:
    """Hilbert-Schmidt inner product ``Tr(A^dag B)``."""
    a, b = as_matrix(a), as_matrix(b)
    _check_same_shape(a, b)
    return complex(np.vdot(a, b))


def matrix_unit(i: int, j: int, n: int) -> np.ndarray:
    e = np.zeros((n, n), dtype=complex)
    e[i, j] = 1.0
    return e


def hermitian_basis(n: int) -> list:
    """Orthonormal (Hilbert-Schmidt) basis of the n x n hermitian matrices.

    The first element is ``I/sqrt(n)``; the remaining ``n^2 - 1`` elements are
    traceless generalized Gell-Mann matrices.
    """
    basis = [np.eye(n, dtype=complex) / np.sqrt(n)]
    basis.extend(traceless_hermitian_basis(n))
    return basis


def traceless_hermitian_basis(n: int) -> list:
    out = []
    for j in range(n):
        for k in range(j + 1, n):
            s = np.zeros((n, n), dtype=complex)
            s[j, k] = s[k, j] = 1 / np.sqrt(2)
            out.append(s)
            a = np.zeros((n, n), dtype=complex)
            a[j, k] = -1j / np.sqrt(2)
            a[k, j] = 1j / np.sqrt(2)
            out.append(a)
    for l in range(1, n):
        d = np.zeros((n, n), dtype=complex)
        d[np.arange(l), np.arange(l)] = 1.0
        d[l, l] = -l
        out.append(d / np.sqrt(l * (l + 1)))
    return out


def hermitian_coords(h: np.ndarray, basis: Sequence[np.ndarray]) -> np.ndarray:
    """Real coordinates of a hermitian matrix in an orthonormal hermitian basis."""
    return np.array([hs_inner(g, h).real for g in basis])


def psd_sqrt(a: np.ndarray) -> np.ndarray:
    w, v = eig_hermitian(a)
    return (v * np.sqrt(np.clip(w, 0, None))) @ dagger(v)


def inv_psd_sqrt(a: np.ndarray) -> np.ndarray:
    w, v = eig_hermitian(a)
    return (v / np.sqrt(w)) @ dagger(v)
