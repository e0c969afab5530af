"""Two-photon bound states and the non-Hermitian skin effect in chiral atomic arrays."""

from .analysis import (
    StateDiagnostics,
    com_momentum_peaks,
    diagnose,
    ipr,
    spatial_profile,
    winding_number,
)
from .analytics import (
    alpha_analytic,
    bound_energy_pi,
    bound_state_analytic,
    inv_mass_analytic,
    localization_length_analytic,
    scattering_energy_analytic,
)
from .config import ExperimentConfig, build_config, load_config
from .dispersion import DispersionBranch, taylor_coefficients, trace_branch, unidirectional_window
from .effective_model import (
    EffectiveParams,
    effective_hamiltonian,
    loss_profile,
    pbc_dispersion,
    potential_kernel,
)
from .errors import ChiralSkinError, ConfigError, NumericsError
from .experiments import ExperimentResult, run_experiment
from .finite_array import two_photon_spectrum
from .linalg import Spectrum, eig_general
from .waveguide_qed import (
    ModelParams,
    TwoExcitationState,
    polariton_dispersion,
    relative_hamiltonian_fullline,
    relative_hamiltonian_halfline,
    scattering_continuum,
    single_excitation_hamiltonian,
    two_excitation_hamiltonian,
)

__version__ = "0.1.0"

__all__ = [
    "ChiralSkinError",
    "ConfigError",
    "DispersionBranch",
    "EffectiveParams",
    "ExperimentConfig",
    "ExperimentResult",
    "ModelParams",
    "NumericsError",
    "Spectrum",
    "StateDiagnostics",
    "TwoExcitationState",
    "alpha_analytic",
    "bound_energy_pi",
    "bound_state_analytic",
    "build_config",
    "com_momentum_peaks",
    "diagnose",
    "effective_hamiltonian",
    "eig_general",
    "inv_mass_analytic",
    "ipr",
    "load_config",
    "localization_length_analytic",
    "loss_profile",
    "pbc_dispersion",
    "polariton_dispersion",
    "potential_kernel",
    "relative_hamiltonian_fullline",
    "relative_hamiltonian_halfline",
    "run_experiment",
    "scattering_continuum",
    "scattering_energy_analytic",
    "single_excitation_hamiltonian",
    "spatial_profile",
    "taylor_coefficients",
    "trace_branch",
    "two_excitation_hamiltonian",
    "two_photon_spectrum",
    "unidirectional_window",
    "winding_number",
]
