"""Eigenmode-expansion optics: index landscapes, supermodes, beam propagation,
per-guide intensity extraction, and index reconstruction/fitting."""

from .grid import Field, TransverseGrid, inner, read_field, write_field
from .modes import ModeSet, helmholtz_matrix, solve_modes
from .profile import (
    IndexProfile,
    RickerParams,
    WaveguideGeometry,
    array_profile,
    ricker_profile,
)
from .propagate import (
    extract_intensities,
    gaussian_input,
    modal_coefficients,
    mode_fidelity,
    propagate_eme,
    shift_mode,
)
from .reconstruct import (
    ReconstructedIndex,
    fit_ricker,
    implied_n_eff,
    reconstruct_index,
)

__all__ = [
    "Field",
    "TransverseGrid",
    "inner",
    "read_field",
    "write_field",
    "ModeSet",
    "helmholtz_matrix",
    "solve_modes",
    "IndexProfile",
    "RickerParams",
    "WaveguideGeometry",
    "array_profile",
    "ricker_profile",
    "extract_intensities",
    "gaussian_input",
    "modal_coefficients",
    "mode_fidelity",
    "propagate_eme",
    "shift_mode",
    "ReconstructedIndex",
    "fit_ricker",
    "implied_n_eff",
    "reconstruct_index",
]
