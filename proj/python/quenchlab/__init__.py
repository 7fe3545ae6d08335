"""Multilevel Bose-Hubbard quench and time-reversal simulator."""

from ._core import (
    LookupError,
    NumericsError,
    ParseError,
    ResourceError,
    ValidationError,
    bessel_j0,
    check_config,
    dominant_frequency,
    effective_coupling,
    page_entropy,
    preset_names,
    preset_text,
    run_config,
    run_preset,
    sector_dimension,
    sweep_size,
)

__all__ = [
    "LookupError",
    "NumericsError",
    "ParseError",
    "ResourceError",
    "ValidationError",
    "bessel_j0",
    "check_config",
    "dominant_frequency",
    "effective_coupling",
    "page_entropy",
    "preset_names",
    "preset_text",
    "run_config",
    "run_preset",
    "sector_dimension",
    "sweep_size",
]
