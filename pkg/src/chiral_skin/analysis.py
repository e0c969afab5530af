"""Eigenstate diagnostics: IPR, center-of-mass momenta, edge profiles, winding."""

from dataclasses import dataclass

import numpy as np

from .errors import BaseOnCurve, NoPeaks, ZeroState
from .linalg import dft_1d, dft_2d, uniform_k_grid
from .waveguide_qed import TwoExcitationState, fold_momentum, pair_basis

UNIDIRECTIONAL = "unidirectional"
BIDIRECTIONAL = "bidirectional"
UNCLASSIFIED = "unclassified"
LEFT, RIGHT, NONE = "left", "right", "none"

DEFAULT_PEAK_THRESHOLD = 0.5
EDGE_DEAD_ZONE = 3
ENVELOPE_WINDOW = 2


@dataclass
class StateDiagnostics:
    ipr: float
    k_peaks: list
    direction_class: str
    edge_side: str
    com_profile: np.ndarray
    decay_rate: float = None
    center_of_mass: float = None


def _values(psi):
    if isinstance(psi, TwoExcitationState):
        return psi.amplitudes
    return np.asarray(psi, dtype=complex)


def _n_sites(psi):
    if isinstance(psi, TwoExcitationState):
        return psi.n_atoms
    a = np.asarray(psi)
    return a.shape[0]


def ipr(amplitudes):
    """Inverse participation ratio sum|psi|^4 / (sum|psi|^2)^2.

    Two-excitation states are summed over their stored pairs.
    """
    w = np.abs(_values(amplitudes)).ravel() ** 2
    total = w.sum()
    if total == 0:
        raise ZeroState("IPR of a zero state")
    return float(np.sum(w**2) / total**2)


def momentum_spectrum(psi, grid_size):
    """Return (K, S(K)): momentum density of a 1D state, or the
    center-of-mass density of a two-excitation state.

    For two excitations, |psi(k1, k2)|^2 is summed along anti-diagonal
    strips k1 + k2 = K (mod 2 pi); on the uniform grid these strips fall
    exactly on grid points.
    """
    if isinstance(psi, TwoExcitationState) or np.ndim(psi) == 2:
        full = psi.full_matrix() if isinstance(psi, TwoExcitationState) else np.asarray(psi)
        density = np.abs(dft_2d(full, grid_size)) ** 2
        j = np.arange(grid_size)
        strip = np.add.outer(j, j) % grid_size
        s = np.bincount(strip.ravel(), weights=density.ravel(), minlength=grid_size)
        # k1 + k2 = -2pi + 2pi (j1 + j2) / G
        k = fold_momentum(2 * np.pi * np.arange(grid_size) / grid_size)
    else:
        k = uniform_k_grid(grid_size)
        s = np.abs(dft_1d(psi, k)) ** 2
    order = np.argsort(k, kind="stable")
    return k[order], s[order]


def com_momentum_peaks(psi, grid_size=None, peak_threshold=DEFAULT_PEAK_THRESHOLD):
    """Center-of-mass momenta at the maxima of the momentum density.

    Local maxima (on the circle) above ``peak_threshold * max`` are kept;
    maxima closer than the momentum resolution 2 pi / N are merged into the
    stronger one.  Returned strongest first, folded into (-pi, pi].
    """
    if not 0 < peak_threshold < 1:
        raise ValueError("peak_threshold must lie in (0, 1)")
    n_sites = _n_sites(psi)
    if grid_size is None:
        grid_size = 4 * n_sites
    k, s = momentum_spectrum(psi, grid_size)
    if not np.any(s > 0):
        raise NoPeaks("state has vanishing momentum density")
    left = np.roll(s, 1)
    right = np.roll(s, -1)
    is_max = (s >= left) & (s > right) & (s >= peak_threshold * s.max())
    idx = np.flatnonzero(is_max)
    if idx.size == 0:
        raise NoPeaks("no maxima above threshold")
    idx = idx[np.argsort(-s[idx], kind="stable")]
    resolution = 2 * np.pi / n_sites
    kept = []
    for i in idx:
        if all(abs(fold_momentum(k[i] - k[j])) >= resolution - 1e-9 for j in kept):
            kept.append(i)
    return [float(k[i]) for i in kept]


def is_self_conjugate(K, tol):
    """True if K and -K coincide modulo 2 pi within *tol* (K near 0 or pi)."""
    return abs(fold_momentum(2 * K)) <= 2 * tol


def classify_direction(peaks, self_conjugate_tol=None):
    """One peak: unidirectional; two: bidirectional; otherwise unclassified.

    With *self_conjugate_tol* set, a lone peak at K = 0 or pi counts as
    bidirectional: there the two standing-wave components K and -K coincide.
    """
    if len(peaks) == 1:
        if self_conjugate_tol is not None and is_self_conjugate(peaks[0], self_conjugate_tol):
            return BIDIRECTIONAL
        return UNIDIRECTIONAL
    if len(peaks) == 2:
        return BIDIRECTIONAL
    return UNCLASSIFIED


def site_profile(psi):
    """Occupation per site, normalized to 1."""
    if isinstance(psi, TwoExcitationState) or np.ndim(psi) == 2:
        full = psi.full_matrix() if isinstance(psi, TwoExcitationState) else np.asarray(psi)
        p = np.sum(np.abs(full) ** 2, axis=1)
    else:
        p = np.abs(np.asarray(psi, dtype=complex)) ** 2
    total = p.sum()
    if total == 0:
        raise ZeroState("profile of a zero state")
    return p / total


def edge_side_of(profile):
    """Edge classification from the center of mass over sites 1..N.

    The +-N/10 band is centred on the mirror point (N + 1) / 2, so a
    reflected profile always gets the reflected label.
    """
    n = profile.size
    sites = np.arange(1, n + 1)
    com = float(sites @ profile)
    mid = (n + 1) / 2
    if com < mid - n / 10:
        return LEFT, com
    if com > mid + n / 10:
        return RIGHT, com
    return NONE, com


def decay_rate(profile, side, dead_zone=EDGE_DEAD_ZONE, window=ENVELOPE_WINDOW):
    """Per-site decay rate of the profile away from the localized edge.

    Fits log of the profile's running mean over *window* sites, on the half
    of the array adjacent to *side* minus *dead_zone* outer sites.  The
    running mean suppresses standing-wave nodes that would otherwise bias a
    log fit; ``window=1`` fits the raw profile.  For ``side='none'`` the
    whole interior is fitted and the slope magnitude returned.
    """
    n = profile.size
    smooth = np.convolve(profile, np.ones(window) / window, mode="valid")
    x = np.arange(smooth.size) + (window - 1) / 2
    half = n // 2
    if side == LEFT:
        sel = (x >= dead_zone) & (x < half)
    elif side == RIGHT:
        sel = (x >= n - half) & (x < n - dead_zone)
    else:
        sel = (x >= dead_zone) & (x < n - dead_zone)
    sel &= smooth > 0
    if sel.sum() < 2:
        return None
    slope = np.polyfit(x[sel], np.log(smooth[sel]), 1)[0]
    if side == LEFT:
        return float(-slope)
    if side == RIGHT:
        return float(slope)
    return float(abs(slope))


def spatial_profile(psi, window=ENVELOPE_WINDOW):
    """Return (com_profile, edge_side, decay_rate, center_of_mass)."""
    p = site_profile(psi)
    side, com = edge_side_of(p)
    return p, side, decay_rate(p, side, window=window), com


def pair_fraction(state, radius):
    """Weight of a two-excitation state on pairs with |m - n| <= radius."""
    m, n = pair_basis(state.n_atoms)
    w = np.abs(state.amplitudes) ** 2
    return float(w[(n - m) <= radius].sum() / w.sum())


def diagnose(psi, grid_size=None, peak_threshold=DEFAULT_PEAK_THRESHOLD, self_conjugate=True):
    n = _n_sites(psi)
    if grid_size is None:
        grid_size = 4 * n
    peaks = com_momentum_peaks(psi, grid_size, peak_threshold)
    # a +-K pair merges into one peak only within pi/N of K = 0 or pi
    tol = np.pi / n if self_conjugate else None
    profile, side, rate, com = spatial_profile(psi)
    return StateDiagnostics(
        ipr=ipr(psi),
        k_peaks=peaks,
        direction_class=classify_direction(peaks, tol),
        edge_side=side,
        com_profile=profile,
        decay_rate=rate,
        center_of_mass=com,
    )


def winding_number(loop, base, closure_tol=1e-6, base_tol=1e-9, max_defect=0.05):
    """Winding of a closed complex curve around *base*.

    Returns (winding, rounding_defect).
    """
    z = np.asarray(loop, dtype=complex) - base
    if z.size < 3:
        raise ValueError("loop needs at least 3 samples")
    if np.min(np.abs(z)) < base_tol:
        raise BaseOnCurve(f"base {base} lies on the curve")
    scale = max(np.abs(np.asarray(loop)).max(), 1.0)
    if abs(z[-1] - z[0]) > closure_tol * scale:
        raise ValueError("loop is not closed")
    steps = np.angle(z[1:] / z[:-1])
    total = steps.sum() / (2 * np.pi)
    w = int(np.rint(total))
    defect = abs(total - w)
    if defect >= max_defect:
        raise BaseOnCurve(f"rounding defect {defect:.3f}: loop too coarsely sampled near base")
    return w, defect


def points_inside_loop(loop, points):
    """Nonzero-winding test of each point against a closed complex curve."""
    z = np.asarray(loop, dtype=complex)
    pts = np.atleast_1d(np.asarray(points, dtype=complex))
    inside = np.zeros(pts.size, dtype=bool)
    for i, p in enumerate(pts):
        d = z - p
        if np.min(np.abs(d)) == 0:
            continue
        inside[i] = abs(np.angle(d[1:] / d[:-1]).sum()) > np.pi
    return inside
