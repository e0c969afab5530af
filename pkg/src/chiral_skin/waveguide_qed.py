"""Hamiltonians of a two-level atom array chirally coupled to a waveguide.

Energies are measured from the atomic resonance (``omega0 = 0`` internally)
in units of ``gamma1d``.  The single-excitation coupling is

    H[m, n] = -i * gamma_fwd * exp(i phi |m-n|)   for m > n
              -i * gamma1d                         for m = n
              -i * gamma_bwd * exp(i phi |m-n|)   for m < n

with row index ``m`` the receiving atom.  Pair (two-excitation) energies
are reported per photon: ``eps = (E - 2 omega0) / 2``.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DispersionSingularity, InvalidParams, TruncationTooSmall

DENOMINATOR_GUARD = 1e-6

UPPER = "upper"
LOWER = "lower"
CONTINUUM_KINDS = ("upper-upper", "upper-lower", "lower-lower")


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of the atom array.

    phi : phase per inter-atom spacing, in (0, pi)
    xi : chirality ratio gamma_bwd / gamma_fwd, in (0, 1]
    """

    phi: float
    xi: float
    gamma1d: float = 1.0
    n_atoms: int = 40
    omega0: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.phi < np.pi:
            raise InvalidParams(f"phi={self.phi} outside (0, pi)")
        if not 0.0 < self.xi <= 1.0:
            raise InvalidParams(f"xi={self.xi} outside (0, 1]")
        if not self.gamma1d > 0:
            raise InvalidParams(f"gamma1d={self.gamma1d} must be positive")
        if int(self.n_atoms) != self.n_atoms or self.n_atoms < 1:
            raise InvalidParams(f"n_atoms={self.n_atoms} must be a positive integer")

    @property
    def gamma_fwd(self):
        return 2 * self.gamma1d / (1 + self.xi)

    @property
    def gamma_bwd(self):
        return 2 * self.gamma1d * self.xi / (1 + self.xi)

    @property
    def theta(self):
        return (1 - self.xi) / (1 + self.xi)

    @property
    def eps_chi(self):
        """Chirality parameter of the relative-motion perturbation, 2*theta."""
        return 2 * self.theta


@dataclass
class TwoExcitationState:
    """Symmetric two-photon amplitude psi_mn on a finite array.

    Only the ``m < n`` amplitudes are stored (lexicographic pair order, see
    :func:`pair_basis`), normalized so that ``sum_{m<n} |psi_mn|^2 = 1/2``;
    the full symmetric matrix then has unit norm.
    """

    n_atoms: int
    amplitudes: np.ndarray
    energy: complex = 0.0
    _full: np.ndarray = field(default=None, init=False, repr=False, compare=False)

    @classmethod
    def from_vector(cls, n_atoms, vector, energy=0.0):
        v = np.asarray(vector, dtype=complex)
        expected = n_atoms * (n_atoms - 1) // 2
        if v.shape != (expected,):
            raise InvalidParams(f"expected {expected} pair amplitudes, got {v.shape}")
        norm = np.linalg.norm(v)
        if norm == 0:
            raise InvalidParams("zero two-excitation vector")
        return cls(n_atoms=n_atoms, amplitudes=v / (np.sqrt(2) * norm), energy=energy)

    def full_matrix(self):
        """Symmetric N x N amplitude matrix with zero diagonal (0-based)."""
        if self._full is None:
            m, n = pair_basis(self.n_atoms)
            psi = np.zeros((self.n_atoms, self.n_atoms), dtype=complex)
            psi[m, n] = self.amplitudes
            psi[n, m] = self.amplitudes
            self._full = psi
        return self._full


def pair_basis(n_atoms):
    """0-based index arrays (m, n), m < n, in lexicographic order."""
    return np.triu_indices(n_atoms, 1)


def single_excitation_hamiltonian(p):
    """N x N effective non-Hermitian Hamiltonian of the array."""
    idx = np.arange(p.n_atoms)
    dist = idx[:, None] - idx[None, :]
    rate = np.where(dist > 0, p.gamma_fwd, np.where(dist < 0, p.gamma_bwd, p.gamma1d))
    h = -1j * rate * np.exp(1j * p.phi * np.abs(dist))
    h[idx, idx] += p.omega0
    return h


def two_excitation_hamiltonian(p):
    """Hard-core two-excitation Hamiltonian on the pair basis (m < n).

    Eigenvalues ``E`` relate to the per-photon energy as
    ``eps = (E - 2*omega0) / 2``.
    """
    if p.n_atoms < 2:
        raise InvalidParams("two excitations need n_atoms >= 2")
    h = single_excitation_hamiltonian(p)
    m, n = pair_basis(p.n_atoms)
    mr, nr = m[:, None], n[:, None]
    mc, nc = m[None, :], n[None, :]
    return (
        h[mr, mc] * (nr == nc)
        + h[nr, nc] * (mr == mc)
        + h[mr, nc] * (nr == mc)
        + h[nr, mc] * (mr == nc)
    )


def _check_truncation(r_max):
    if r_max < 2:
        raise TruncationTooSmall(f"r_max={r_max} < 2")


def relative_hamiltonian_halfline(p, K, r_max):
    """Relative-motion Hamiltonian H_K on r = 1..r_max (bosonic sector).

    An eigenvalue ``lam`` corresponds to the pair energy ``lam / 2``.
    """
    _check_truncation(r_max)
    r = np.arange(1, r_max + 1)
    h = np.zeros((r_max, r_max), dtype=complex)
    for eta in (1, -1):
        d = np.abs(r[:, None] + eta * r[None, :])
        h += p.gamma_bwd * np.exp(1j * (p.phi + K / 2) * d)
        h += p.gamma_fwd * np.exp(1j * (p.phi - K / 2) * d)
    return -1j * h


def fullline_coordinates(r_max):
    """Relative coordinates -r_max..r_max with s = 0 removed."""
    return np.concatenate([np.arange(-r_max, 0), np.arange(1, r_max + 1)])


def relative_hamiltonian_fullline(p, K, r_max):
    """Relative-motion Hamiltonian on s in {-r_max..r_max} \\ {0}.

    Eigenvalues are pair energies directly.  Even states (chi_s = chi_-s)
    reproduce the half-line spectrum; odd states are the fermionic sector,
    which photons do not populate.
    """
    _check_truncation(r_max)
    s = fullline_coordinates(r_max)
    d = s[:, None] - s[None, :]
    ad = np.abs(d)
    phase = np.exp(1j * p.phi * ad)
    return p.gamma1d * phase * (
        -1j * np.cos(K * d / 2) - 0.5 * p.eps_chi * np.sin(K * ad / 2)
    )


def fold_even(full, r_max):
    """Project a full-line operator onto even states, returning r = 1..r_max."""
    pos = np.arange(r_max, 2 * r_max)
    neg = pos[::-1] - r_max
    return full[np.ix_(pos, pos)] + full[np.ix_(pos, neg)]


def polariton_dispersion(p, K, guard=DENOMINATOR_GUARD):
    """Single-polariton energy omega(K) - omega0."""
    k = np.asarray(K, dtype=float)
    den = np.cos(k) - np.cos(p.phi)
    if np.any(np.abs(den) < guard):
        raise DispersionSingularity(f"K within guard of +-phi={p.phi:.6g}")
    out = p.gamma1d * (np.sin(p.phi) + p.theta * np.sin(k)) / den
    return out if out.ndim else float(out)


def polariton_branch(p, k):
    """'upper' for |k| < phi (folded to (-pi, pi]), 'lower' otherwise."""
    return UPPER if abs(fold_momentum(k)) < p.phi else LOWER


def fold_momentum(k):
    """Fold momenta into (-pi, pi]."""
    k = np.asarray(k, dtype=float)
    out = np.pi - np.mod(np.pi - k, 2 * np.pi)
    return out if out.ndim else float(out)


@dataclass
class Continuum:
    """Scattering continuum at fixed K as a union of closed intervals."""

    K: float
    intervals: list
    by_kind: dict

    def contains(self, energy, margin=0.0):
        e = float(np.real(energy))
        return any(lo - margin <= e <= hi + margin for lo, hi in self.intervals)

    def distance(self, energy):
        """Distance from *energy* to the nearest interval (0 if inside)."""
        e = float(np.real(energy))
        best = np.inf
        for lo, hi in self.intervals:
            if lo <= e <= hi:
                return 0.0
            best = min(best, lo - e if e < lo else e - hi)
        return best


def _merge(intervals, gap):
    out = []
    for lo, hi in sorted(intervals):
        if out and lo - out[-1][1] <= gap:
            out[-1][1] = max(out[-1][1], hi)
        else:
            out.append([lo, hi])
    return [tuple(x) for x in out]


def scattering_continuum(p, K, q_samples=2000, guard=DENOMINATOR_GUARD):
    """Energy range of two unbound polaritons with total momentum K.

    The pair energy ``(omega(q) + omega(K-q)) / 2`` is continuous on each
    run of q samples that crosses no polariton singularity, so each run maps
    onto one interval [min, max].  Runs are also labelled by which polariton
    branches q and K-q belong to.
    """
    if q_samples < 100:
        raise InvalidParams(f"q_samples={q_samples} < 100")
    q = -np.pi + 2 * np.pi * (np.arange(q_samples) + 0.5) / q_samples
    den1 = np.cos(q) - np.cos(p.phi)
    den2 = np.cos(K - q) - np.cos(p.phi)
    ok = (np.abs(den1) >= guard) & (np.abs(den2) >= guard)
    q_ok = q[ok]
    energy = 0.5 * (
        polariton_dispersion(p, q_ok, guard) + polariton_dispersion(p, K - q_ok, guard)
    )
    # a run breaks wherever a denominator changes sign or a sample was skipped
    s1 = np.sign(den1[ok])
    s2 = np.sign(den2[ok])
    pos = np.flatnonzero(ok)
    breaks = np.flatnonzero((np.diff(s1) != 0) | (np.diff(s2) != 0) | (np.diff(pos) != 1)) + 1
    # q = -pi and q = pi - dq are neighbours on the circle
    bounds = np.concatenate([[0], breaks, [len(q_ok)]])
    runs = [np.arange(a, b) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
    wraps = (
        len(runs) > 1
        and pos[0] == 0
        and pos[-1] == q_samples - 1
        and s1[0] == s1[-1]
        and s2[0] == s2[-1]
    )
    if wraps:
        runs[0] = np.concatenate([runs[-1], runs[0]])
        runs.pop()

    gap = 2 * np.pi / q_samples
    raw = {kind: [] for kind in CONTINUUM_KINDS}
    for run in runs:
        kinds = sorted(
            (polariton_branch(p, q_ok[run[0]]), polariton_branch(p, K - q_ok[run[0]])),
            key=lambda b: b != UPPER,
        )
        raw["-".join(kinds)].append((energy[run].min(), energy[run].max()))
    by_kind = {kind: _merge(v, gap) for kind, v in raw.items()}
    union = _merge([iv for v in by_kind.values() for iv in v], gap)
    return Continuum(K=float(K), intervals=union, by_kind=by_kind)
