"""Raman spin control and photonic cluster-state budgeting for group-IV
color centers, parameterized for the tin vacancy."""

__version__ = "0.1.0"

from .model import (
    G4VParameters,
    MagneticField,
    EigenSystem,
    DipoleOperators,
    Polarization,
    build_hamiltonian,
    dipole_in_eigenbasis,
    polarization_vector,
)
from .control import (
    GaussianEnvelope,
    RamanDrive,
    ExcitationDrive,
    raman_drive,
    excitation_drive,
    raman_frame,
    raman_model,
    excitation_model,
    effective_rotation,
    amplitudes_for_rotation,
    cross_coupling_polarizations,
    excitation_amplitude,
)
from .dynamics import (
    DecayModel,
    build_decay_model,
    branching_ratio,
    calibrate_dipole_scale,
    radiative_rate,
    phonon_rate,
    propagate_schrodinger,
    propagate_lindblad,
)
from .gates import GateTarget, FidelityResult, gate_fidelity, composite_fidelity, excitation_fidelity
from .optimize import OptimizationProblem, OptimizerBudget, optimize_gate, grid_scan, excitation_length_scan
from .quality import ProtocolParams, ErrorBudget, QualityReport, quality, optimal_cooperativity
