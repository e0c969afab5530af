"""Closed-form results for the bound pair near K = pi and the effective model.

These are the analytic oracles the numerical branch is checked against.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

_EPS = 1e-12


@dataclass(frozen=True)
class AnalyticBoundState:
    """Non-chiral bound state at K = pi.

    ``chi0`` maps relative coordinate r (both signs) to its amplitude.
    ``kappa`` is the inverse pair size, ``-ln|cos 2 phi|``.
    """

    kappa: float
    chi0: dict
    eps_pi0: float

    def vector(self, r_values):
        return np.array([self.chi0.get(int(r), 0.0) for r in r_values])


def bound_state_analytic(phi, r_max=None, gamma1d=1.0):
    """Analytic bound state at K = pi for xi = 1.

    The amplitude on r = +-2j decays as (cos 2phi)^(j-1); writing it as a
    power of cos 2phi keeps it real for either sign of cos 2phi.
    """
    c = np.cos(2 * phi)
    if abs(c) < _EPS or abs(c) >= 1 - _EPS:
        raise DomainError(f"cos(2 phi)={c:.3g}: bound state undefined")
    kappa = -np.log(abs(c))
    if r_max is None:
        r_max = int(np.ceil(40.0 / kappa)) + 2
    if r_max * kappa < 10:
        raise DomainError(f"r_max={r_max} too short for kappa={kappa:.4g} (need >= 10/kappa)")
    chi = {}
    amp = np.sqrt(1 - c**2) / np.sqrt(2)
    for j in range(1, r_max // 2 + 1):
        value = (-1) ** j * amp * c ** (j - 1)
        chi[2 * j] = value
        chi[-2 * j] = value
    return AnalyticBoundState(kappa=kappa, chi0=chi, eps_pi0=bound_energy_pi(phi, gamma1d))


def bound_energy_pi(phi, gamma1d=1.0):
    """Non-chiral bound-pair energy at K = pi, 2 gamma cot(2 phi)."""
    return 2 * gamma1d / np.tan(2 * phi)


def scattering_energy_analytic(phi, q, gamma1d=1.0, guard=1e-9):
    """Energy of the relative-motion scattering state of momentum q at K = pi."""
    den = np.sin(phi) ** 2 - np.cos(q / 2) ** 2
    if np.any(np.abs(den) <= guard):
        raise DomainError("q at the resonance cos^2(q/2) = sin^2(phi)")
    return gamma1d * np.sin(phi) * np.cos(phi) / den


def alpha_analytic(phi, xi, gamma1d=1.0, form="full"):
    """First-order chiral slope of the branch at K = pi.

    ``form="full"`` uses eps_chi = 2(1-xi)/(1+xi); ``form="linear"``
    uses (1 - xi), its xi -> 1 reduction.
    """
    cphi = np.cos(phi)
    if abs(cphi) < _EPS:
        raise DomainError("cos(phi) = 0")
    if form == "full":
        small = 2 * (1 - xi) / (1 + xi)
    elif form == "linear":
        small = 1 - xi
    else:
        raise ValueError(f"unknown form {form!r}")
    return gamma1d * np.cos(3 * phi) / (8 * cphi**5) * small


def inv_mass_analytic(phi, gamma1d=1.0):
    cphi = np.cos(phi)
    if abs(cphi) < _EPS:
        raise DomainError("cos(phi) = 0")
    return -gamma1d * np.sin(phi) * np.cos(3 * phi) / (8 * cphi**6)


def localization_length_analytic(t, gamma):
    """|Im K| = arcsinh(gamma / 4t): decay rate of |psi| per site.

    The intensity |psi|^2 decays twice as fast.
    """
    return float(np.arcsinh(gamma / (4 * t)))
