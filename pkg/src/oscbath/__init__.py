"""Simulation toolkit for a damped macroscopic oscillator in an Ohmic bath.

Builds discretized Ohmic environments, decouples each system-mode pair
exactly, samples the joint Gaussian ground state, integrates the full
(N+1)-body dynamics and the reduced memory-kernel equation, and compares the
quantum and Bohmian damped closed forms.
"""

__version__ = "0.1.0"

from .bath import (
    DISCRETIZATIONS,
    KERNEL_MATCHED,
    PAPER_EQ44,
    BathRealization,
    BathSpec,
    SystemParams,
    discretize_ohmic,
    effective_frequency_squared,
    memory_kernel_continuum,
    memory_kernel_discrete,
    spectral_density,
)
from .errors import (
    CholeskyFailure,
    ConfigError,
    DegenerateSignal,
    GridMismatch,
    InvalidSpec,
    NegativeXiSq,
    NoConvergence,
    NonPositiveMode,
    OscbathError,
    OverCoupling,
    OverdampedUnsupported,
    StepTooLarge,
)
from .modes import (
    GroundState,
    ModePair,
    PhasePoint,
    PhasePointBatch,
    build_ground_state,
    from_normal_coords,
    mode_frequencies,
    mode_frequency_squares,
    rotation_angle,
    sample_ground_state,
    to_normal_coords,
)
from .potentials import (
    BohmianCoefficients,
    EtaEstimate,
    bohmian_coefficients,
    bohmian_force,
    classical_potential,
    eta,
    mean_eta,
    quantum_potential,
)
from .dynamics import (
    LangevinParams,
    Trajectory,
    bohmian_langevin_analytic,
    classical_noise,
    integrate_damped_oscillator,
    integrate_full_hamiltonian,
    integrate_gle,
    langevin_params_from_initial,
    merged_solution,
    mode_energies,
    mode_energies_unrotated,
    quantum_langevin_analytic,
    total_energy,
)
from .analysis import (
    DampedSineFit,
    RegimeClassification,
    TrajectoryComparison,
    classify_regime,
    compare_trajectories,
    fit_damped_sine,
)
from .config import ConfigDocument, RunManifest, load_config, parse_config_text
