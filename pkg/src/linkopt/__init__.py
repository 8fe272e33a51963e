"""Energy-per-bit optimization of reliability-constrained wireless links.

The package models the energy cost of delivering an information bit over a
Rayleigh block-fading link under three power-amplifier efficiency laws, and
jointly selects modulation order, average SNR, payload size and
retransmission cap against a probabilistic reliability target.
"""

from .config import ScenarioConfig, default_config, load_config, parse_config
from .energy import (
    EnergyCoefficients,
    LinkBudget,
    PaModel,
    PaVariant,
    avg_transmissions,
    e0,
    energy_coefficients,
    energy_per_bit,
    pa_efficiency,
    pa_power,
    path_gain,
    transmit_power,
)
from .errors import (
    ConfigError,
    DegeneratePayloadError,
    LinkoptError,
    OutOfRegimeError,
    PeakPowerError,
    QuadratureError,
)
from .lifetime import DutyProfile, lifetime, lifetime_gain
from .optimizer import (
    Binding,
    OperatingPoint,
    constrain_snr,
    golden_section_min,
    joint_optimize,
    optimal_payload_quadratic,
    optimal_payload_tpa,
    optimal_snr_quadratic,
    optimal_snr_tpa,
    snr_max,
    solve_candidate,
    sweep_distance,
)
from .per import (
    BerForm,
    CircuitClass,
    ModulationScheme,
    QosSpec,
    awgn_per,
    ber,
    default_modulations,
    payload_max,
    per_rayleigh,
    per_rayleigh_exact,
    required_per,
    snr_min,
    waterfall_from_coded_constants,
    waterfall_threshold,
    waterfall_threshold_numeric,
)

__version__ = "0.1.0"

__all__ = [
    "BerForm",
    "Binding",
    "CircuitClass",
    "ConfigError",
    "DegeneratePayloadError",
    "DutyProfile",
    "EnergyCoefficients",
    "LinkBudget",
    "LinkoptError",
    "ModulationScheme",
    "OperatingPoint",
    "OutOfRegimeError",
    "PaModel",
    "PaVariant",
    "PeakPowerError",
    "QosSpec",
    "QuadratureError",
    "ScenarioConfig",
    "avg_transmissions",
    "awgn_per",
    "ber",
    "constrain_snr",
    "default_config",
    "default_modulations",
    "e0",
    "energy_coefficients",
    "energy_per_bit",
    "golden_section_min",
    "joint_optimize",
    "lifetime",
    "lifetime_gain",
    "load_config",
    "optimal_payload_quadratic",
    "optimal_payload_tpa",
    "optimal_snr_quadratic",
    "optimal_snr_tpa",
    "pa_efficiency",
    "pa_power",
    "parse_config",
    "path_gain",
    "payload_max",
    "per_rayleigh",
    "per_rayleigh_exact",
    "required_per",
    "snr_max",
    "snr_min",
    "solve_candidate",
    "sweep_distance",
    "transmit_power",
    "waterfall_from_coded_constants",
    "waterfall_threshold",
    "waterfall_threshold_numeric",
]
