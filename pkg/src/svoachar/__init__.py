"""Exact q-series and character computations for self-dual SVOAs."""

from .qseries import (
    SQRT2,
    TICKS_PER_P,
    TICKS_PER_Q,
    GridError,
    PrecisionError,
    QSeries,
    Scalar,
    format_series,
    invert,
    lagrange_coefficient,
    mul,
    power,
    rebase,
)
from .svoa import CharacterSpec, LinearForm, character, even_odd_split, fit_basis, primaries, shadow

__all__ = [
    "SQRT2",
    "TICKS_PER_P",
    "TICKS_PER_Q",
    "GridError",
    "PrecisionError",
    "QSeries",
    "Scalar",
    "format_series",
    "invert",
    "lagrange_coefficient",
    "mul",
    "power",
    "rebase",
    "CharacterSpec",
    "LinearForm",
    "character",
    "even_odd_split",
    "fit_basis",
    "primaries",
    "shadow",
]
__version__ = "0.1.0"
