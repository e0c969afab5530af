"""Dense complex eigendecomposition and direct-sum Fourier transforms.

This is the only module that knows how eigenpairs are computed.  The
solver delegates to LAPACK (``zgeev`` through :func:`numpy.linalg.eig`) and
then enforces the residual contract explicitly: every returned eigenpair
carries its residual ``||A v - lambda v||_2``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, EmptyInput, NonConvergence

DEFAULT_TOL = 1e-10


def as_complex_matrix(matrix):
    """Validate and convert *matrix* to a square, finite complex array."""
    a = np.asarray(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] < 1:
        raise EmptyInput("matrix has dimension 0")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains NaN or Inf entries")
    return a


@dataclass(frozen=True)
class Spectrum:
    """Right eigendecomposition of a general complex matrix.

    ``eigenvectors[:, i]`` is the unit-norm eigenvector belonging to
    ``eigenvalues[i]``; eigenvalues are sorted by real part, then by
    imaginary part.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residuals: np.ndarray

    def __len__(self):
        return len(self.eigenvalues)

    def vector(self, i):
        return self.eigenvectors[:, i]


def _sort_order(values):
    # lexsort uses the last key as primary
    return np.lexsort((values.imag, values.real))


def eig_general(matrix, tol=DEFAULT_TOL):
    """Full right eigendecomposition of a non-Hermitian complex matrix.

    Raises
    ------
    NonConvergence
        If LAPACK fails to converge, or if any eigenpair residual exceeds
        ``tol * ||A||_F``.
    DimensionMismatch
        If *matrix* is not square.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    a = as_complex_matrix(matrix)
    try:
        w, v = np.linalg.eig(a)
    except np.linalg.LinAlgError as exc:
        raise NonConvergence(f"eigensolver did not converge for dim={a.shape[0]}") from exc

    order = _sort_order(w)
    w = w[order]
    v = v[:, order]
    v = v / np.linalg.norm(v, axis=0)

    residuals = np.linalg.norm(a @ v - v * w, axis=0)
    bound = tol * max(np.linalg.norm(a), np.finfo(float).tiny)
    worst = residuals.max()
    if worst > bound:
        raise NonConvergence(
            f"eigenpair residual {worst:.3e} exceeds tol*||A||_F = {bound:.3e}"
        )
    return Spectrum(eigenvalues=w, eigenvectors=v, residuals=residuals)


def eigvals_sorted(matrix):
    """Eigenvalues only, in the same order :func:`eig_general` uses."""
    w = np.linalg.eigvals(as_complex_matrix(matrix))
    return w[_sort_order(w)]


def dft_1d(values, k_grid):
    """psi(K) = sum_{n=1..N} psi_n exp(-i K n) at every K of *k_grid*."""
    psi = np.asarray(values, dtype=complex).ravel()
    if psi.size == 0:
        raise EmptyInput("dft_1d needs at least one amplitude")
    k = np.atleast_1d(np.asarray(k_grid, dtype=float))
    n = np.arange(1, psi.size + 1)
    return np.exp(-1j * np.outer(k, n)) @ psi


def uniform_k_grid(grid_size):
    """Uniform grid over [-pi, pi) with *grid_size* points."""
    return -np.pi + 2 * np.pi * np.arange(grid_size) / grid_size


def dft_2d(psi, grid_size):
    """psi(k1, k2) = sum_{m,n} psi_mn exp(-i (k1 m + k2 n)) on a uniform grid.

    Both momenta run over ``uniform_k_grid(grid_size)``; the result has
    shape ``(grid_size, grid_size)`` indexed as ``[k1, k2]``.  The double sum
    is evaluated as two dense matrix products, which is still the direct
    sum (no FFT), so it holds for any grid size.
    """
    a = np.asarray(psi, dtype=complex)
    if a.size == 0:
        raise EmptyInput("dft_2d needs a non-empty amplitude matrix")
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected square amplitude matrix, got {a.shape}")
    n_sites = a.shape[0]
    if grid_size < n_sites:
        raise ValueError(f"grid_size={grid_size} must be >= N={n_sites}")
    phase = np.exp(-1j * np.outer(uniform_k_grid(grid_size), np.arange(1, n_sites + 1)))
    return phase @ a @ phase.T
