"""Systoles, essential arcs and length spectra of weighted graphs on surfaces."""

from .surface import (
    Surface,
    DualSurface,
    build_surface,
    dual,
    genus_and_boundaries,
    parse_surface,
)

__version__ = "0.1.0"

__all__ = [
    "Surface",
    "DualSurface",
    "build_surface",
    "dual",
    "genus_and_boundaries",
    "parse_surface",
]
