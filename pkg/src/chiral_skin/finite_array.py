"""Two-photon eigenstates of a finite array and their comparison with the branch."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import analysis
from .linalg import DEFAULT_TOL, eig_general
from .waveguide_qed import TwoExcitationState, fold_momentum, two_excitation_hamiltonian

BOUND_PAIR_FRACTION = 0.85


def default_pair_radius(n_atoms):
    return max(4, n_atoms // 6)


@dataclass
class PairStateRecord:
    state_id: int
    energy: complex
    pair_fraction: float
    bound: bool
    diagnostics: analysis.StateDiagnostics
    state: TwoExcitationState


def map_threads(fn, items, threads=1):
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def two_photon_spectrum(
    p,
    grid_size=None,
    peak_threshold=analysis.DEFAULT_PEAK_THRESHOLD,
    eig_tol=DEFAULT_TOL,
    pair_radius=None,
    threads=1,
):
    """Diagonalize the finite two-excitation problem and diagnose every state."""
    n = p.n_atoms
    grid_size = 4 * n if grid_size is None else grid_size
    radius = default_pair_radius(n) if pair_radius is None else pair_radius
    spec = eig_general(two_excitation_hamiltonian(p), tol=eig_tol)
    eps = (spec.eigenvalues - 2 * p.omega0) / 2

    def one(i):
        state = TwoExcitationState.from_vector(n, spec.vector(i), eps[i])
        frac = analysis.pair_fraction(state, radius)
        diag = analysis.diagnose(state, grid_size, peak_threshold)
        return PairStateRecord(i, eps[i], frac, frac >= BOUND_PAIR_FRACTION, diag, state)

    return map_threads(one, range(len(eps)), threads)


@dataclass
class BranchMatch:
    state_id: int
    K: float
    energy: float
    branch_energy: float
    tolerance: float

    @property
    def deviation(self):
        return abs(self.energy - self.branch_energy)

    @property
    def ok(self):
        return self.deviation <= self.tolerance


def branch_matches(records, branch, n_atoms, factor=3.0):
    """Compare bound finite states with the infinite-system branch.

    Every extracted peak K of a bound state that falls where the branch is
    bound is checked against Re eps_pair(K).  The allowed deviation is
    ``factor * slope * dK`` with ``dK = 2 pi / N`` the momentum resolution
    and ``slope`` the largest |d eps / dK| within one resolution cell of K
    (so extrema, where finite-size quantization shifts the energy at second
    order, are not held to a zero tolerance).
    """
    order = branch.display_order()
    k = np.mod(branch.k_grid[order], 2 * np.pi)
    e = branch.energies[order].real
    f = branch.bound_flags[order]
    kb, eb = k[f], e[f]
    slope = np.abs(np.gradient(eb, kb))
    dk = 2 * np.pi / n_atoms
    out = []
    for rec in records:
        if not rec.bound:
            continue
        for K in rec.diagnostics.k_peaks:
            kk = np.mod(K, 2 * np.pi)
            if kk < kb.min() or kk > kb.max():
                continue
            # the branch may have a gap only at K = pi's complement, not inside
            cell = np.abs(kb - kk) <= dk
            if not np.any(cell):
                continue
            tol = factor * slope[cell].max() * dk
            out.append(
                BranchMatch(rec.state_id, float(fold_momentum(K)), float(rec.energy.real),
                            float(np.interp(kk, kb, eb)), float(tol))
            )
    return out
