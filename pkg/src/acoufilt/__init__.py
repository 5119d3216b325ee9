"""Millimeter-wave acoustic resonator and ladder filter toolkit."""

from .curves import ComplexCurve, parse_grid_spec
from .fitting import FitOptions, FitResult, fit_mbvd, initial_guess
from .mbvd import (
    MbvdParams,
    ResonatorSummary,
    antiresonance,
    coupling_k2,
    mbvd_from_targets,
    perceived_resonance,
    q_at_antiresonance,
    resonator_admittance,
    series_resonance,
    summarize,
)
from .metrics import FilterMetrics, crossing_interpolate, passband_metrics
from .network import (
    AbcdBlock,
    ElementKind,
    LadderDesign,
    SParameterBlock,
    abcd_to_s,
    admittance_from_s11,
    build_ladder_response,
    cascade,
    element_abcd,
    one_port_s11,
    shunt_series_shunt,
)
from .synthesis import (
    DesignSpec,
    SynthesisResult,
    ThicknessScaling,
    synthesize_ladder,
    thickness_scale,
)

__version__ = "0.1.0"

__all__ = [
    "AbcdBlock",
    "ComplexCurve",
    "DesignSpec",
    "ElementKind",
    "FilterMetrics",
    "FitOptions",
    "FitResult",
    "LadderDesign",
    "MbvdParams",
    "ResonatorSummary",
    "SParameterBlock",
    "SynthesisResult",
    "ThicknessScaling",
    "abcd_to_s",
    "admittance_from_s11",
    "antiresonance",
    "build_ladder_response",
    "cascade",
    "coupling_k2",
    "crossing_interpolate",
    "element_abcd",
    "fit_mbvd",
    "initial_guess",
    "mbvd_from_targets",
    "one_port_s11",
    "parse_grid_spec",
    "passband_metrics",
    "perceived_resonance",
    "q_at_antiresonance",
    "resonator_admittance",
    "series_resonance",
    "shunt_series_shunt",
    "summarize",
    "synthesize_ladder",
    "thickness_scale",
]
