"""
dressed_rf: resonance fluorescence of a quantum dot dressed by one or two
resonant fields, with LA-phonon damping at finite temperature.

Angular frequencies are in rad/ns, times in ns, temperatures in K.
"""

__version__ = "0.1.0"

from .bath import (
    HBAR_OVER_KB,
    REFERENCE_BATH,
    BathParams,
    CorrelationTable,
    build_correlation_table,
    correlation_phi,
    displacement_B,
    kernel_lambda_x,
    kernel_lambda_y,
    polaron_shift,
    spectral_density,
    thermal_factor,
)
from .dressed import (
    REFERENCE_DRIVE,
    DriveConfig,
    Spectrum,
    Transition,
    TransitionKind,
    coupling_g_n,
    coupling_matrix,
    coupling_matrix_element,
    oscillator_phi,
    selection_rule,
    spectrum_components,
    spectrum_Ld,
    weight_density,
)
from .engine import (
    RATE_COLUMNS,
    DriveMode,
    GridSpec,
    Peak,
    PeakReport,
    ScenarioConfig,
    peak_analysis,
    rate_table,
    temperature_sweep,
    thermal_spectrum,
)
from .errors import (
    ConfigError,
    DressedRFError,
    NonConvergence,
    NonFinite,
    NumericalError,
    PeakCountMismatch,
    TableRange,
    TailNotDecayed,
)
from .quadrature import (
    QuadResult,
    QuadSettings,
    fourier_half_transform,
    integrate_finite,
    integrate_semi_infinite,
)
from .rates import (
    RateModel,
    RateSet,
    full_polaron_explicit,
    rate_full_polaron,
    rate_gamma_y,
    rate_gamma_z,
    rate_one_phonon,
    rate_set,
    rate_weak_coupling,
    renormalized_rabi,
    response_K,
)
