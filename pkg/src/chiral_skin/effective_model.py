"""Composite-particle model: chiral hopping plus momentum-dependent loss.

    H = sum_n t (e^{i Phi} a_n^+ a_{n+1} + h.c.) - i sum_{n,n'} U_{nn'} a_n^+ a_{n'}

with U_{nn'} the lattice Fourier transform of a smoothed loss window
U(K) ~ Gamma for |K| < 2phi.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParams, QuadratureNotConverged

OPEN = "open"
PERIODIC = "periodic"
QUADRATURE_RTOL = 1e-8


@dataclass(frozen=True)
class EffectiveParams:
    """Defaults: t=1, Phi=-0.5, Gamma=0.3, sigma=0.05, 2phi=pi/2, N=100."""

    t: float = 1.0
    Phi: float = -0.5
    Gamma: float = 0.3
    sigma: float = 0.05
    two_phi: float = np.pi / 2
    n_sites: int = 100

    def __post_init__(self):
        if not self.t > 0:
            raise InvalidParams(f"t={self.t} must be positive")
        if self.Gamma < 0:
            raise InvalidParams(f"Gamma={self.Gamma} must be non-negative")
        if not self.sigma > 0:
            raise InvalidParams(f"sigma={self.sigma} must be positive")
        if not 0 < self.two_phi < np.pi:
            raise InvalidParams(f"two_phi={self.two_phi} outside (0, pi)")
        if int(self.n_sites) != self.n_sites or self.n_sites < 2:
            raise InvalidParams(f"n_sites={self.n_sites} must be an integer >= 2")

    def regime_warning(self):
        """Message when sigma is too wide for the finite-size momentum broadening."""
        limit = 2 * np.pi / self.n_sites
        if self.sigma > limit:
            return (
                f"sigma={self.sigma:g} exceeds 2*pi/N={limit:.4g}: the loss step is wider "
                f"than the finite-size momentum broadening pi/N={np.pi / self.n_sites:.4g}"
            )
        return None


def loss_profile(p, K):
    """Smoothed loss window U(K)."""
    k = np.asarray(K, dtype=float)
    return p.Gamma / np.pi * (
        np.arctan((k + p.two_phi) / p.sigma) - np.arctan((k - p.two_phi) / p.sigma)
    )


def _trapezoid_kernel(p, distances, m):
    # periodic trapezoid rule on (-pi, pi]: equal weights
    k = -np.pi + 2 * np.pi * (np.arange(m) + 1) / m
    u_k = loss_profile(p, k)
    return np.cos(np.outer(distances, k)) @ u_k / m


def potential_kernel(p, distances=None, points=None):
    """u(d) = int dK/2pi e^{iKd} U(K), by trapezoid quadrature with a doubling check."""
    d = np.arange(p.n_sites) if distances is None else np.asarray(distances)
    m = max(4096, 64 * p.n_sites) if points is None else int(points)
    coarse = _trapezoid_kernel(p, d, m)
    fine = _trapezoid_kernel(p, d, 2 * m)
    scale = max(np.abs(fine).max(), np.finfo(float).tiny)
    change = np.abs(fine - coarse).max() / scale
    if change >= QUADRATURE_RTOL and p.Gamma > 0:
        raise QuadratureNotConverged(
            f"kernel changed by {change:.2e} (relative) on doubling M={m}"
        )
    return fine


def periodic_kernel(p):
    """Discrete-K analogue of u(d) for the ring: exact for Bloch waves."""
    n = p.n_sites
    k = 2 * np.pi * np.arange(n) / n
    d = np.arange(n)
    return (np.exp(1j * np.outer(d, k)) @ loss_profile(p, fold(k)) / n).real


def fold(k):
    return np.pi - np.mod(np.pi - np.asarray(k, dtype=float), 2 * np.pi)


def nonlocal_potential(p, points=None):
    """Real symmetric Toeplitz matrix U_{nn'} = u(|n - n'|)."""
    u = potential_kernel(p, points=points)
    idx = np.arange(p.n_sites)
    return u[np.abs(idx[:, None] - idx[None, :])]


def hopping_matrix(p, boundary=OPEN):
    n = p.n_sites
    h = np.zeros((n, n), dtype=complex)
    i = np.arange(n - 1)
    h[i, i + 1] = p.t * np.exp(1j * p.Phi)
    h[i + 1, i] = p.t * np.exp(-1j * p.Phi)
    if boundary == PERIODIC:
        h[n - 1, 0] += p.t * np.exp(1j * p.Phi)
        h[0, n - 1] += p.t * np.exp(-1j * p.Phi)
    return h


def effective_hamiltonian(p, boundary=OPEN, points=None, warn=True):
    if boundary not in (OPEN, PERIODIC):
        raise InvalidParams(f"boundary must be 'open' or 'periodic', got {boundary!r}")
    if warn:
        msg = p.regime_warning()
        if msg:
            warnings.warn(msg, RuntimeWarning, stacklevel=2)
    h = hopping_matrix(p, boundary)
    idx = np.arange(p.n_sites)
    d = np.abs(idx[:, None] - idx[None, :])
    if boundary == OPEN:
        u = potential_kernel(p, points=points)[d]
    else:
        # circulant: u_ring(n - n' mod N) is already periodic in the distance
        u = periodic_kernel(p)[np.mod(idx[:, None] - idx[None, :], p.n_sites)]
    return h - 1j * u


def pbc_dispersion(p, k_grid):
    """eps(K) = 2t cos(K + Phi) - i U(K)."""
    k = np.asarray(k_grid, dtype=float)
    return 2 * p.t * np.cos(k + p.Phi) - 1j * loss_profile(p, k)


def bloch_momenta(n_sites):
    return fold(2 * np.pi * np.arange(n_sites) / n_sites)
