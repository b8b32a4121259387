"""Desk-scale simulator for storing orbital-angular-momentum qutrit
entanglement in an atomic frequency comb memory: entangled-pair source,
comb-echo memory channel, photon-counting tomography, and Bell-type
entanglement certification, glued together by batch pipelines.
"""
__version__ = "0.1.0"

from .afc import (CombProfile, EchoResult, LgProfile, OpticalPulse,
                  PumpProfile, StorageChannel, analytic_efficiency,
                  apply_channel, apply_channel_single, build_comb,
                  channel_from_physics, channel_from_table, effective_depth,
                  gaussian_pulse, mode_efficiency, multimode_capacity,
                  propagate_echo, sigma_for_visibility, transfer_function,
                  uniform_channel, visibility)
from .config import Finding, load_config, validate_config
from .entanglement import (BellResult, BellSettings, bell_from_counts,
                           canonical_settings, cglmp_value, fidelity_to_mes,
                           fourier_basis, joint_probabilities, negativity,
                           optimize_cglmp, settings_from_phases,
                           simulate_bell_counts, uhlmann_fidelity)
from .estimators import CglmpOptimizer, MleStateEstimator, ProcessTomographyEstimator
from .gellmann import gellmann_basis
from .linalg import partial_trace, partial_transpose, project_psd, trace_norm
from .pipelines import run, verify_report
from .presets import get_preset, preset_names
from .source import (BASIS_LS, OamKet, SpdcSpec, basis_ket, mes, pair_ket,
                     qutrit_ket, spdc_state, superposition_state,
                     tomography_kets)
from .tomography import (CountTable, TomoEstimate, born_probabilities,
                         choi_from_chi, default_settings, depolarize,
                         depolarizing_chi, identity_chi, linear_inversion,
                         mle_reconstruct, process_fidelity,
                         process_tomography, simulate_counts, tp_residual)
from .validation import ContractError

__all__ = [
    "__version__",
    "BASIS_LS", "BellResult", "BellSettings", "CglmpOptimizer", "CombProfile",
    "ContractError", "CountTable", "EchoResult", "Finding", "LgProfile",
    "MleStateEstimator", "OamKet", "OpticalPulse", "ProcessTomographyEstimator",
    "PumpProfile", "SpdcSpec", "StorageChannel", "TomoEstimate",
    "analytic_efficiency", "apply_channel", "apply_channel_single",
    "basis_ket", "bell_from_counts", "born_probabilities", "build_comb",
    "canonical_settings", "cglmp_value", "channel_from_physics",
    "channel_from_table", "choi_from_chi", "default_settings", "depolarize",
    "depolarizing_chi", "effective_depth", "fidelity_to_mes", "fourier_basis",
    "gaussian_pulse", "gellmann_basis", "get_preset", "identity_chi",
    "joint_probabilities", "linear_inversion", "load_config", "mes",
    "mle_reconstruct", "mode_efficiency", "multimode_capacity", "negativity",
    "optimize_cglmp", "pair_ket", "partial_trace", "partial_transpose",
    "preset_names", "process_fidelity", "process_tomography",
    "project_psd", "propagate_echo", "qutrit_ket", "run",
    "settings_from_phases", "sigma_for_visibility", "simulate_bell_counts",
    "simulate_counts", "spdc_state", "superposition_state", "tomography_kets",
    "tp_residual", "trace_norm", "transfer_function", "uhlmann_fidelity",
    "uniform_channel", "validate_config", "verify_report", "visibility",
]
