"""Bound-pair dispersion branch of the relative-motion Hamiltonian."""

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import BranchLost, InsufficientStencil, SeedNotFound, TruncationTooSmall
from .linalg import eig_general
from .waveguide_qed import fold_momentum, relative_hamiltonian_halfline, scattering_continuum

DEFAULT_R_MAX = 200
DEFAULT_DK = 2 * np.pi / 400
TAIL_FRACTION = 0.1
BOUND_TAIL = 1e-6
SEED_TAIL = 1e-8
MIN_OVERLAP = 0.5
XI_STEP = 0.05


@dataclass
class BoundState:
    K: float
    energy: complex
    vector: np.ndarray
    ipr: float
    tail: float


@dataclass
class DispersionBranch:
    """Tracked bound-pair branch eps_pair(K).

    ``energies`` is NaN where the branch was not followed (beyond the point
    where the pair dissociated).  ``taylor`` is filled by
    :func:`taylor_coefficients`.
    """

    k_grid: np.ndarray
    energies: np.ndarray
    bound_flags: np.ndarray
    params: object = None
    r_max: int = DEFAULT_R_MAX
    taylor: dict = field(default_factory=dict)

    def energy_at(self, K):
        i = self.index_of(K)
        return self.energies[i]

    def index_of(self, K, atol=1e-9):
        d = np.abs(fold_momentum(np.asarray(self.k_grid) - K))
        i = int(np.argmin(d))
        if d[i] > atol:
            raise KeyError(f"K={K} not on the branch grid")
        return i

    def display_order(self):
        """Indices sorting the grid by K mod 2pi, i.e. with K = pi centred."""
        return np.argsort(np.mod(self.k_grid, 2 * np.pi), kind="stable")


def default_k_grid(dk=DEFAULT_DK):
    """Uniform grid on (-pi, pi] containing K = pi, step *dk*."""
    n = int(round(2 * np.pi / dk))
    return fold_momentum(np.pi - dk * np.arange(n))[::-1]


def _diagonalize(p, K, r_max):
    spec = eig_general(relative_hamiltonian_halfline(p, K, r_max))
    vecs = spec.eigenvectors
    weights = np.abs(vecs) ** 2
    ipr = np.sum(weights**2, axis=0)
    n_tail = max(1, int(round(TAIL_FRACTION * r_max)))
    tail = weights[-n_tail:].sum(axis=0)
    return spec.eigenvalues / 2, vecs, ipr, tail


def _is_bound(ipr, tail, r_max):
    return (ipr > 5.0 / r_max) & (tail < BOUND_TAIL)


def _follow(p, K, r_max, previous):
    energies, vecs, ipr, tail = _diagonalize(p, K, r_max)
    overlap = np.abs(previous.conj() @ vecs)
    i = int(np.argmax(overlap))
    if overlap[i] <= MIN_OVERLAP:
        raise BranchLost(
            f"max overlap {overlap[i]:.3f} at K={K:.6g}, xi={p.xi:.4g}; refine the grid"
        )
    return BoundState(K, energies[i], vecs[:, i], ipr[i], tail[i])


def seed_state(p, r_max=DEFAULT_R_MAX, K=np.pi):
    """Bound state at K = pi on the branch that tends to 2 cot(2 phi) as xi -> 1.

    Chiral parameters are reached by adiabatic continuation in xi from the
    non-chiral limit, following the eigenvector of maximal overlap.
    """
    p1 = replace(p, xi=1.0)
    energies, vecs, ipr, tail = _diagonalize(p1, K, r_max)
    candidates = np.flatnonzero(_is_bound(ipr, tail, r_max))
    if candidates.size == 0:
        raise SeedNotFound(f"no bound eigenstate at K={K:.6g} for phi={p.phi:.6g}")
    target = 2 * p.gamma1d / np.tan(2 * p.phi)
    i = candidates[np.argmin(np.abs(energies[candidates] - target))]
    state = BoundState(K, energies[i], vecs[:, i], ipr[i], tail[i])

    n_steps = int(np.ceil((1.0 - p.xi) / XI_STEP))
    for xi in np.linspace(1.0, p.xi, n_steps + 1)[1:]:
        try:
            state = _follow(replace(p, xi=float(xi)), K, r_max, state.vector)
        except BranchLost as exc:
            raise SeedNotFound(str(exc)) from exc
    if state.tail >= SEED_TAIL:
        raise TruncationTooSmall(
            f"seed tail weight {state.tail:.2e} >= {SEED_TAIL:g}; increase r_max={r_max}"
        )
    return state


def seed_converged(p, r_max=DEFAULT_R_MAX, tol=1e-6):
    """Seed energy with the doubling convergence check applied."""
    e1 = seed_state(p, r_max).energy
    e2 = seed_state(p, 2 * r_max).energy
    if abs(e2 - e1) >= tol:
        raise TruncationTooSmall(
            f"seed energy moved by {abs(e2 - e1):.2e} when doubling r_max={r_max}"
        )
    return e1


def trace_branch(p, k_grid=None, r_max=DEFAULT_R_MAX, q_samples=2000):
    """Follow the bound branch outward from K = pi by eigenvector continuation.

    Tracking stops in each direction at the first K where the state stops
    being bound (leaks into the truncation tail, delocalizes, or its energy
    enters the scattering continuum); further points get NaN energies.
    """
    k = fold_momentum(np.asarray(default_k_grid() if k_grid is None else k_grid, dtype=float))
    order = np.argsort(np.mod(k, 2 * np.pi), kind="stable")
    k_disp = np.mod(k[order], 2 * np.pi)
    hits = np.flatnonzero(np.isclose(k_disp, np.pi, atol=1e-12))
    if hits.size == 0:
        raise SeedNotFound("k_grid must contain K = pi")
    start = hits[0]

    energies = np.full(k.size, np.nan + 0j)
    flags = np.zeros(k.size, dtype=bool)
    seed = seed_state(p, r_max)
    energies[order[start]] = seed.energy
    flags[order[start]] = True

    for step in (-1, 1):
        state = seed
        j = start + step
        while 0 <= j < k.size:
            K = k[order[j]]
            state = _follow(p, K, r_max, state.vector)
            bound = bool(_is_bound(state.ipr, state.tail, r_max))
            if bound:
                bound = not scattering_continuum(p, K, q_samples).contains(state.energy)
            if not bound:
                break
            energies[order[j]] = state.energy
            flags[order[j]] = True
            j += step
    return DispersionBranch(k_grid=k, energies=energies, bound_flags=flags, params=p, r_max=r_max)


def branch_at(p, k_values, r_max=DEFAULT_R_MAX):
    """Branch energies at a few momenta near pi, continued from the seed.

    The momenta are visited in order of distance from pi, so a short
    stencil does not need a full-zone trace.
    """
    k_values = np.asarray(k_values, dtype=float)
    seed = seed_state(p, r_max)
    out = np.empty(k_values.size, dtype=complex)
    order = np.argsort(np.abs(k_values - np.pi), kind="stable")
    prev_left = prev_right = seed
    for i in order:
        K = k_values[i]
        if abs(K - np.pi) < 1e-14:
            out[i] = seed.energy
            continue
        prev = prev_left if K < np.pi else prev_right
        state = _follow(p, K, r_max, prev.vector)
        if K < np.pi:
            prev_left = state
        else:
            prev_right = state
        out[i] = state.energy
    return out


def stencil_branch(p, stencil_h=2 * DEFAULT_DK, r_max=DEFAULT_R_MAX):
    """Minimal branch sampled at pi, pi +- h, pi +- 2h."""
    offsets = np.arange(-2, 3) * stencil_h
    k = np.pi + offsets
    e = branch_at(p, k, r_max)
    return DispersionBranch(
        k_grid=k, energies=e, bound_flags=np.ones(k.size, dtype=bool), params=p, r_max=r_max
    )


def taylor_coefficients(branch, stencil_h=2 * DEFAULT_DK):
    """Central finite-difference slope and inverse mass of the branch at K = pi.

    The branch grid is read in the unfolded coordinate, so ``pi + h`` is the
    point just across the zone edge.
    """
    k_unfolded = np.mod(np.asarray(branch.k_grid, dtype=float), 2 * np.pi)
    values = {}
    for j in (-1, 0, 1):
        target = np.pi + j * stencil_h
        hit = np.flatnonzero(np.isclose(k_unfolded, target, atol=1e-9 * max(1, stencil_h)))
        if hit.size == 0 or not branch.bound_flags[hit[0]]:
            raise InsufficientStencil(f"branch lacks a bound sample at K={target:.9g}")
        values[j] = branch.energies[hit[0]].real
    h = stencil_h
    alpha = (values[1] - values[-1]) / (2 * h)
    inv_mass = (values[1] - 2 * values[0] + values[-1]) / h**2
    branch.taylor = {
        "eps_pi": branch.energies[branch.index_of(np.pi)],
        "alpha_num": alpha,
        "inv_mass_num": inv_mass,
    }
    return {"alpha_num": alpha, "inv_mass_num": inv_mass}


def bound_segments(branch):
    """Contiguous bound runs of the branch in display order (K = pi centred).

    Returns a list of (K, Re eps) array pairs.
    """
    order = branch.display_order()
    k = np.mod(branch.k_grid[order], 2 * np.pi)
    e = branch.energies[order].real
    f = branch.bound_flags[order]
    segments = []
    j = 0
    while j < f.size:
        if f[j]:
            i = j
            while j < f.size and f[j]:
                j += 1
            segments.append((k[i:j], e[i:j]))
        else:
            j += 1
    return segments


def count_solutions(branch, energies):
    """Number of K on bound runs of the branch with Re eps_pair(K) = energy."""
    energies = np.atleast_1d(np.asarray(energies, dtype=float))
    counts = np.zeros(energies.size, dtype=int)
    for _, e in bound_segments(branch):
        if e.size < 2:
            continue
        lo = np.minimum(e[:-1], e[1:])
        hi = np.maximum(e[:-1], e[1:])
        # half-open cells so a shared vertex is counted once
        counts += np.sum((energies[:, None] >= lo) & (energies[:, None] < hi), axis=1)
    return counts


def unidirectional_window(branch, n_energies=4001):
    """Largest energy interval where the branch has exactly one solution K.

    Returns ``(eps1, eps2)``, or ``(nan, nan)`` when no such range exists.
    """
    valid = branch.energies[branch.bound_flags].real
    if valid.size < 2:
        return (np.nan, np.nan)
    grid = np.linspace(valid.min(), valid.max(), n_energies)
    single = count_solutions(branch, grid) == 1
    best = (0, None)
    j = 0
    while j < grid.size:
        if single[j]:
            i = j
            while j < grid.size and single[j]:
                j += 1
            if j - i > best[0]:
                best = (j - i, (grid[i], grid[j - 1]))
        else:
            j += 1
    if best[1] is None or best[0] < 2:
        return (np.nan, np.nan)
    return best[1]
