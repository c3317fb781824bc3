"""Fuchsian representations from Fenchel-Nielsen data and a closed-geodesic oracle."""
from .enumerate import (
    EnumerationBudgetError,
    GeodesicRecord,
    enumerate_geodesics,
    geodesic_length,
    records_to_csv,
    systole_bruteforce,
)
from .mobius import NonHyperbolicError
from .tiling import (
    ConstructionError,
    CuffGluing,
    FNSurface,
    HolonomyRep,
    canonical_cyclic_word,
    format_word,
    parse_word,
    representation,
)

__all__ = [
    "ConstructionError",
    "CuffGluing",
    "EnumerationBudgetError",
    "FNSurface",
    "GeodesicRecord",
    "HolonomyRep",
    "NonHyperbolicError",
    "canonical_cyclic_word",
    "enumerate_geodesics",
    "format_word",
    "geodesic_length",
    "parse_word",
    "records_to_csv",
    "representation",
    "systole_bruteforce",
]
