"""Frequency-domain Kalman adaptive-filter laboratory.

Implements the diagonalized frequency-domain Kalman filter (FKF) and two
modified variants (MFKF1, MFKF2) for overlap-save block adaptive filtering,
together with a dense time-domain oracle, analytical steady-state and
convergence predictors, a deterministic simulation harness, and a CLI.
"""

from .filters import (
    VARIANTS,
    AlgorithmConfig,
    FilterState,
    FrameResult,
    filter_output,
    init_state,
    min_step,
    process_frame,
    step_size,
    update_covariance,
    update_weights,
)
from .oracle import (
    CirculantPair,
    CorrelationSet,
    circulant_of,
    contraction_mfkf1,
    contraction_mfkf2,
    decompose_blocks,
    estimate_correlations,
    fkf_steady_state,
    td_step,
    wiener,
    wiener_estimate,
    wiener_fir,
)
from .signals import (
    SourceSpec,
    SystemSpec,
    generate_source,
    load_wav,
    save_wav,
    synthetic_rir,
    synthetic_speech,
    system_taps,
)
from .sim import (
    MetricsTrace,
    ScenarioConfig,
    ensemble_average,
    erle,
    frames_to_level,
    misalignment,
    run_scenario,
    wiener_reference,
)
from .spectral import dft, idft, idft_real, project_anticausal, project_causal
from .config import ConfigError, load_scenario, parse_scenario
from .presets import PRESETS, preset

__version__ = "0.1.0"

__all__ = [
    "VARIANTS",
    "AlgorithmConfig",
    "FilterState",
    "FrameResult",
    "filter_output",
    "init_state",
    "min_step",
    "process_frame",
    "step_size",
    "update_covariance",
    "update_weights",
    "CirculantPair",
    "CorrelationSet",
    "circulant_of",
    "contraction_mfkf1",
    "contraction_mfkf2",
    "decompose_blocks",
    "estimate_correlations",
    "fkf_steady_state",
    "td_step",
    "wiener",
    "wiener_estimate",
    "wiener_fir",
    "SourceSpec",
    "SystemSpec",
    "generate_source",
    "load_wav",
    "save_wav",
    "synthetic_rir",
    "synthetic_speech",
    "system_taps",
    "MetricsTrace",
    "ScenarioConfig",
    "ensemble_average",
    "erle",
    "frames_to_level",
    "misalignment",
    "run_scenario",
    "wiener_reference",
    "dft",
    "idft",
    "idft_real",
    "project_anticausal",
    "project_causal",
    "ConfigError",
    "load_scenario",
    "parse_scenario",
    "PRESETS",
    "preset",
    "__version__",
]
